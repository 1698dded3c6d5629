#ifndef LAWV_MODEL_HPP
#define LAWV_MODEL_HPP

#include <lawv/theory.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace lawv {

/// A finite algebra of a theory: a carrier {0..size-1} plus one total
/// lookup table per signature symbol, flat in row-major order (an
/// arity-0 table holds a single element).
struct FiniteAlgebra {
    std::shared_ptr<const Theory> theory;
    int size = 0;
    std::vector<std::vector<int>> tables;

    int apply(int symbol, std::span<const int> inputs) const;

    friend bool operator==(const FiniteAlgebra & a, const FiniteAlgebra & b)
    {
        return a.size == b.size && a.tables == b.tables;
    }
};

/// Row-major rank of an input tuple over a carrier of the given size.
std::size_t tuple_rank(std::span<const int> inputs, int size);
/// Inverse of tuple_rank.
std::vector<int> tuple_unrank(std::size_t rank, int length, int size);

/// Throws Error unless the algebra's tables match its theory's
/// signature shape and all entries are in range.
void check_shape(const FiniteAlgebra & a);

/// Evaluates a term under an environment of carrier elements.
int evaluate(const FiniteAlgebra & a, const Term & t, std::span<const int> env);

/// A failed equation instance: the environment and the unequal values
/// the two sides took.
struct Violation {
    int equation = 0; // index into theory->equations
    std::vector<int> env;
    int lhs_value = 0;
    int rhs_value = 0;
};

/// Empty result means every equation holds under every environment.
/// Violations come in (equation, lexicographic environment) order.
std::vector<Violation> check_model(const FiniteAlgebra & a);

/// Relabels along a carrier bijection: result.op(p(x)...) = p(a.op(x...)).
FiniteAlgebra permute_algebra(const FiniteAlgebra & a, std::span<const int> perm);

/// The lexicographically minimal relabeling over all carrier
/// permutations; two algebras are isomorphic iff their canonical forms
/// are equal.
FiniteAlgebra canonicalize(const FiniteAlgebra & a);

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t models = 0;
};

/// Thrown when a search exceeds its node budget.
struct BoundError : Error {
    BoundError(const std::string & message, SearchStats search_stats) :
        Error(message), stats(search_stats) {}
    SearchStats stats;
};

struct EnumerationOptions {
    bool exact_size = false;  // only size max_size instead of 1..max_size
    bool up_to_iso = false;   // one canonical representative per class
    bool allow_empty = false; // admit the size-0 algebra where consistent
    int jobs = 1;
    std::uint64_t node_budget = 2'000'000'000;
};

/// All finite models of each size in 1..max_size (or exactly max_size),
/// in canonical order: size ascending, then lexicographic on the
/// flattened tables. Output is independent of jobs.
std::vector<FiniteAlgebra> enumerate_models(std::shared_ptr<const Theory> theory, int max_size,
    const EnumerationOptions & options = {}, SearchStats * stats = nullptr);

} // namespace lawv

#endif
