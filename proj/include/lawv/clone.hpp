#ifndef LAWV_CLONE_HPP
#define LAWV_CLONE_HPP

#include <lawv/free_algebra.hpp>
#include <lawv/hom.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace lawv {

/// All terms over n variables of depth <= max_depth, in canonical order
/// (increasing depth, then symbol and argument order, no repeats).
std::vector<Term> enumerate_terms(const Signature & sig, int n, int max_depth);

/// The family a term (tuple) induces by evaluation: component of A at
/// (a_1..a_n) is (eval of each tuple entry). Always natural against
/// every homomorphism between the models.
NaturalFamily induced_family(const Term & t, int arity, std::span<const FiniteAlgebra> models);
NaturalFamily induced_family(std::span<const Term> tuple, int arity,
    std::span<const FiniteAlgebra> models);

struct CloneBounds {
    FreeBounds free;                          // for the finite-free-algebra route
    std::uint64_t node_budget = 200'000'000;  // for the constraint search route
};

/// All natural families U^n => U^m over the category's models, sorted
/// by flattened component tables. When the free algebra F(n) is finite
/// and small enough to live inside the category, the candidates are
/// read off as m-tuples of U(F(n)) at the generators and validated;
/// otherwise a constraint search branches over component cells with
/// forward propagation along every hom. Throws BoundError if the
/// search exceeds its node budget.
std::vector<NaturalFamily> natural_families(const ModelCategory & category, int n, int m,
    const CloneBounds & bounds = {});

std::vector<NaturalFamily> natural_families(std::shared_ptr<const Theory> theory, int n, int m,
    int k, const CloneBounds & bounds = {});

enum class CellVerdict { Equal, ExtraNatural, BoundExceeded };
std::string_view to_string(CellVerdict verdict);

struct ReconstructionCell {
    int n = 0;
    int m = 0;
    std::vector<std::vector<Term>> term_ops; // canonical m-tuples of term representatives
    int natural_count = 0;
    CellVerdict verdict = CellVerdict::BoundExceeded;
    std::vector<NaturalFamily> witnesses;    // natural families that are not term-induced
    bool dedup_exact = false;                // term dedup confirmed by a finite F(n) in range
    std::string note;                        // detail for BOUND_EXCEEDED cells
};

struct ReconstructionReport {
    std::string theory_name;
    int k = 0;
    int depth = 0;
    std::vector<ReconstructionCell> cells; // (n, m) for n <= n_max, 1 <= m <= m_max
};

/// Compares the depth-bounded term clone (deduplicated by agreement on
/// all the given models) against the natural families, cell by cell.
/// EQUAL means the term-induced injection is a bijection at these
/// bounds; bound errors are recorded per cell and never abort the
/// report. `models` must be the up-to-iso models of size <= k.
ReconstructionReport reconstruct_theory(std::shared_ptr<const Theory> theory,
    std::vector<FiniteAlgebra> models, int n_max, int m_max, int k, int depth,
    const CloneBounds & bounds = {}, int jobs = 1);

ReconstructionReport reconstruct_theory(std::shared_ptr<const Theory> theory,
    int n_max, int m_max, int k, int depth, const CloneBounds & bounds = {}, int jobs = 1);

/// A refuted translated equation: evidence that a theory morphism does
/// not induce a functor of the model categories.
struct MorphismCounterexample {
    int equation = 0;    // index into the source theory's equations
    FiniteAlgebra model; // target-theory model
    std::vector<int> env;
    int lhs_value = 0;
    int rhs_value = 0;
};

struct InvalidMorphismError : Error {
    InvalidMorphismError(const std::string & message, MorphismCounterexample cx) :
        Error(message), counterexample(std::move(cx)) {}
    MorphismCounterexample counterexample;
};

/// Checks that every source equation, translated along F, holds in
/// every target model of size <= k.
std::optional<MorphismCounterexample> validate_theory_morphism(const TheoryMorphism & f, int k);

/// The restriction functor F* on objects: same carrier, each source
/// symbol's table computed by evaluating its assigned target term.
/// Throws InvalidMorphismError (with the offending instance) if the
/// result fails some source equation, i.e. F is not a theory morphism
/// as far as this model can tell.
FiniteAlgebra restrict_along(const TheoryMorphism & f, const FiniteAlgebra & b);

} // namespace lawv

#endif
