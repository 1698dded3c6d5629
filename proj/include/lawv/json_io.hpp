#ifndef LAWV_JSON_IO_HPP
#define LAWV_JSON_IO_HPP

#include <lawv/clone.hpp>
#include <lawv/free_algebra.hpp>
#include <lawv/hom.hpp>
#include <lawv/sieve.hpp>

#include <json.hpp>

#include <span>
#include <string>

namespace lawv {

using Json = nlohmann::ordered_json;

/// {"theory":, "theory_hash":, "size":, "tables": {symbol: flat array,
/// or a bare integer for constants}}
Json algebra_to_json(const FiniteAlgebra & a);

/// Validates the record against the theory (name, hash, table shape).
FiniteAlgebra algebra_from_json(const Json & j, std::shared_ptr<const Theory> theory);

/// {"source": algebra hash, "target": algebra hash, "map": [..]}
Json hom_to_json(const Homomorphism & h);

Json violations_to_json(const FiniteAlgebra & a, std::span<const Violation> violations);

Json free_result_to_json(const Theory & theory, int generators, const FreeAlgebraResult & result);

/// {"models": [hashes], "families": [{"components": [[..] per model]}]}
Json families_to_json(std::span<const FiniteAlgebra> models, std::span<const NaturalFamily> families);

Json reconstruction_to_json(const Theory & theory, const ReconstructionReport & report,
    std::span<const FiniteAlgebra> models);

/// {"k":, "surviving": [names], "refuted": [{"eq":, "model":, "env":,
/// "lhs":, "rhs":}], "duplicates": [...]}
Json sieve_report_to_json(const SieveReport & report, std::span<const Equation> candidates);

Json equivalence_to_json(const EquivalenceVerdict & verdict, const std::string & lhs,
    const std::string & rhs);

Json morphism_counterexample_to_json(const TheoryMorphism & f, const MorphismCounterexample & cx);

} // namespace lawv

#endif
