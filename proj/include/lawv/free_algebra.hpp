#ifndef LAWV_FREE_ALGEBRA_HPP
#define LAWV_FREE_ALGEBRA_HPP

#include <lawv/model.hpp>

#include <variant>
#include <vector>

namespace lawv {

struct FreeBounds {
    int max_elements = 256;
    int max_depth = 16;
};

/// The free algebra on n generators, when the term-class closure
/// stabilizes: a finite model whose elements are term classes, with one
/// canonical term per element. Element i of `generators` is the carrier
/// index of the class of Var(i).
struct FreeAlgebra {
    FiniteAlgebra algebra;
    std::vector<int> generators;
    std::vector<Term> element_terms;
};

/// Closure still growing when a bound was hit. The trace records the
/// class count after each completed round (plus the count at abort).
struct FreeBoundExceeded {
    int classes_found = 0;
    int depth_reached = 0;
    std::vector<int> class_count_trace;
};

using FreeAlgebraResult = std::variant<FreeAlgebra, FreeBoundExceeded>;

/// Builds F(n) by enumerating terms over n generators in rounds of
/// increasing depth, maintaining equivalence classes with a union-find
/// congruence closure driven by all equation instances among the
/// classes discovered so far. Finite when every operation maps existing
/// classes to existing classes and the closure is at a fixpoint.
FreeAlgebraResult free_algebra(std::shared_ptr<const Theory> theory, int generators,
    const FreeBounds & bounds = {});

} // namespace lawv

#endif
