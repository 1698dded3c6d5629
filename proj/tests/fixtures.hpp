#ifndef LAWV_TESTS_FIXTURES_HPP
#define LAWV_TESTS_FIXTURES_HPP

namespace fixtures {

inline constexpr const char * monoid = R"(theory Monoid
  op mul : 2
  op e : 0
  eq assoc (x y z) : mul(mul(x,y),z) = mul(x,mul(y,z))
  eq left_unit (x) : mul(e(),x) = x
  eq right_unit (x) : mul(x,e()) = x
end
)";

inline constexpr const char * group = R"(theory Group
  op mul : 2
  op inv : 1
  op e : 0
  eq assoc (x y z) : mul(mul(x,y),z) = mul(x,mul(y,z))
  eq left_unit (x) : mul(e(),x) = x
  eq right_unit (x) : mul(x,e()) = x
  eq left_inverse (x) : mul(inv(x),x) = e()
  eq right_inverse (x) : mul(x,inv(x)) = e()
end
)";

inline constexpr const char * semilattice = R"(theory Semilattice
  op meet : 2
  eq assoc (x y z) : meet(meet(x,y),z) = meet(x,meet(y,z))
  eq comm (x y) : meet(x,y) = meet(y,x)
  eq idem (x) : meet(x,x) = x
end
)";

inline constexpr const char * pointed = R"(theory Pointed
  op e : 0
end
)";

inline constexpr const char * bare_set = R"(theory Set
end
)";

} // namespace fixtures

#endif
