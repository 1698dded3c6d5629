#ifndef LAWV_HOM_HPP
#define LAWV_HOM_HPP

#include <lawv/model.hpp>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lawv {

/// A carrier map under which every operation square commutes. The
/// endpoints are non-owning; keep the algebras alive alongside.
struct Homomorphism {
    const FiniteAlgebra * source = nullptr;
    const FiniteAlgebra * target = nullptr;
    std::vector<int> map;
};

/// First operation square that fails to commute, if any: the symbol and
/// the input tuple with map(op_src(tuple)) != op_tgt(map(tuple)).
struct FailedSquare {
    int symbol = 0;
    std::vector<int> inputs;
};

/// Checks every operation square in (signature, lexicographic tuple)
/// order. Throws Error on size mismatches.
std::optional<FailedSquare> homomorphism_failure(std::span<const int> map,
    const FiniteAlgebra & a, const FiniteAlgebra & b);

bool is_homomorphism(std::span<const int> map, const FiniteAlgebra & a, const FiniteAlgebra & b);

/// All homomorphisms A -> B in lexicographic order of the map
/// sequences. Images of constants are pinned first, then elements are
/// assigned in carrier order with operation-closure propagation.
std::vector<Homomorphism> enumerate_homs(const FiniteAlgebra & a, const FiniteAlgebra & b,
    bool only_bijective = false);

/// All bijective self-homomorphisms; the result is re-checked to
/// contain the identity and be closed under composition and inverse.
std::vector<Homomorphism> automorphism_group(const FiniteAlgebra & a);

/// One component per algebra of an ordered model collection: a total
/// table A^n -> A^m, flat as [env_rank * coarity + j]. Represents an
/// element of Nat(U^n, U^m) restricted to that collection when
/// check_naturality passes.
struct NaturalFamily {
    int arity = 0;
    int coarity = 0;
    std::vector<std::vector<int>> components;

    friend bool operator==(const NaturalFamily &, const NaturalFamily &) = default;
};

struct NaturalityFailure {
    int hom = 0; // index into the checked hom list
    std::vector<int> input;
};

struct MissingAlgebraError : Error {
    using Error::Error;
};

/// Checks the naturality square of every hom pointwise: for f: A -> B,
/// f^m(alpha_A(x)) == alpha_B(f^n(x)) for all x in A^n. The components
/// are parallel to `models`, and every hom endpoint must be an element
/// of `models` (else MissingAlgebraError).
std::optional<NaturalityFailure> check_naturality(const NaturalFamily & family,
    std::span<const FiniteAlgebra> models, std::span<const Homomorphism> homs);

/// A truncated category of algebras: models in canonical order plus
/// every homomorphism between every ordered pair, hom pointers aimed at
/// the owned models vector.
struct ModelCategory {
    std::vector<FiniteAlgebra> models;
    std::vector<Homomorphism> homs;
    std::vector<std::pair<int, int>> endpoints; // parallel to homs

    ModelCategory() = default;
    ModelCategory(ModelCategory &&) = default;
    ModelCategory & operator=(ModelCategory &&) = default;
    ModelCategory(const ModelCategory &) = delete;
    ModelCategory & operator=(const ModelCategory &) = delete;
};

ModelCategory build_category(std::vector<FiniteAlgebra> models);

} // namespace lawv

#endif
