#ifndef LAWV_SIEVE_HPP
#define LAWV_SIEVE_HPP

#include <lawv/model.hpp>

#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace lawv {

/// No model of size <= k falsifies the statement. Says nothing beyond
/// the bound; the sieve never claims unbounded validity.
struct ValidUpTo {
    int k = 0;
    friend bool operator==(const ValidUpTo &, const ValidUpTo &) = default;
};

/// A concrete countermodel: the smallest model in canonical enumeration
/// order, with the lexicographically smallest falsifying environment.
struct Refutation {
    FiniteAlgebra model;
    std::vector<int> env;
    int lhs_value = 0;
    int rhs_value = 0;
};

using SieveVerdict = std::variant<ValidUpTo, Refutation>;

/// Validity of an equation over the given models (canonical order,
/// up-to-iso representatives of every size <= k).
SieveVerdict check_validity(const Equation & eq, std::span<const FiniteAlgebra> models, int k);

/// Convenience overload that enumerates the models itself.
SieveVerdict check_validity(const Theory & theory, const Equation & eq, int k,
    const EnumerationOptions & options = {});

struct SieveReport {
    int k = 0;
    std::vector<int> surviving;                      // candidate indices, input order
    std::vector<std::pair<int, Refutation>> refuted; // candidate indices, input order
    std::vector<std::pair<int, int>> duplicates;     // (dropped, kept) index pairs
};

/// Partitions candidates by validity over the shared model collection.
/// Structural and alpha-variant (same up to a variable renaming)
/// duplicates are collapsed onto their first occurrence.
SieveReport sieve_candidates(std::span<const Equation> candidates,
    std::span<const FiniteAlgebra> models, int k, int jobs = 1);

SieveReport sieve_candidates(const Theory & theory, std::span<const Equation> candidates,
    int k, int jobs = 1);

using EquivalenceVerdict = std::variant<ValidUpTo, Refutation>;

/// Bounded semantic equivalence of two terms over var_count variables:
/// equivalent iff they evaluate identically on every model of size <= k
/// under every environment, with a distinguishing witness otherwise.
EquivalenceVerdict syntactic_equivalence(const Term & lhs, const Term & rhs, int var_count,
    std::span<const FiniteAlgebra> models, int k);

EquivalenceVerdict syntactic_equivalence(const Theory & theory, const Term & lhs, const Term & rhs,
    int var_count, int k);

} // namespace lawv

#endif
