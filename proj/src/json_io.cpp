#include "lawv/json_io.hpp"
#include "lawv/dsl.hpp"
#include "lawv/hash.hpp"

namespace lawv {

Json algebra_to_json(const FiniteAlgebra & a)
{
    Json tables = Json::object();
    for (std::size_t s = 0; s < a.tables.size(); ++s) {
        const auto & sym = a.theory->signature[s];
        if (sym.arity == 0)
            tables[sym.name] = a.tables[s][0];
        else
            tables[sym.name] = a.tables[s];
    }
    return Json{
        {"theory", a.theory->name},
        {"theory_hash", theory_hash(*a.theory)},
        {"size", a.size},
        {"tables", std::move(tables)},
    };
}

FiniteAlgebra algebra_from_json(const Json & j, std::shared_ptr<const Theory> theory)
{
    if (!j.is_object() || !j.contains("size") || !j.contains("tables"))
        throw Error("algebra record: expected an object with 'size' and 'tables'");
    if (j.contains("theory") && j["theory"].get<std::string>() != theory->name)
        throw Error("algebra record is for theory '" + j["theory"].get<std::string>() +
            "', expected '" + theory->name + "'");
    if (j.contains("theory_hash") && j["theory_hash"].get<std::string>() != theory_hash(*theory))
        throw Error("algebra record's theory hash does not match the given theory");

    FiniteAlgebra a;
    a.theory = std::move(theory);
    a.size = j["size"].get<int>();
    a.tables.resize(a.theory->signature.size());
    for (std::size_t s = 0; s < a.theory->signature.size(); ++s) {
        const auto & sym = a.theory->signature[s];
        if (!j["tables"].contains(sym.name))
            throw Error("algebra record: missing table for '" + sym.name + "'");
        const Json & table = j["tables"][sym.name];
        if (sym.arity == 0 && table.is_number_integer())
            a.tables[s] = {table.get<int>()};
        else
            a.tables[s] = table.get<std::vector<int>>();
    }
    check_shape(a);
    return a;
}

Json hom_to_json(const Homomorphism & h)
{
    return Json{
        {"source", algebra_hash(*h.source)},
        {"target", algebra_hash(*h.target)},
        {"map", h.map},
    };
}

Json violations_to_json(const FiniteAlgebra & a, std::span<const Violation> violations)
{
    Json out = Json::array();
    for (const auto & v : violations) {
        const Equation & eq = a.theory->equations[v.equation];
        out.push_back(Json{
            {"eq", eq.name},
            {"env", v.env},
            {"lhs", v.lhs_value},
            {"rhs", v.rhs_value},
        });
    }
    return out;
}

Json free_result_to_json(const Theory & theory, int generators, const FreeAlgebraResult & result)
{
    Json out{
        {"theory", theory.name},
        {"theory_hash", theory_hash(theory)},
        {"generators", generators},
    };
    if (const auto * finite = std::get_if<FreeAlgebra>(&result)) {
        out["result"] = "finite";
        out["size"] = finite->algebra.size;
        auto names = default_var_names(generators);
        Json elements = Json::array();
        for (const auto & term : finite->element_terms)
            elements.push_back(format_term(term, names, theory.signature));
        out["elements"] = std::move(elements);
        out["generator_elements"] = finite->generators;
        out["algebra"] = algebra_to_json(finite->algebra);
    }
    else {
        const auto & exceeded = std::get<FreeBoundExceeded>(result);
        out["result"] = "bound-exceeded";
        out["classes_found"] = exceeded.classes_found;
        out["depth_reached"] = exceeded.depth_reached;
        out["class_count_trace"] = exceeded.class_count_trace;
    }
    return out;
}

Json families_to_json(std::span<const FiniteAlgebra> models, std::span<const NaturalFamily> families)
{
    Json hashes = Json::array();
    for (const auto & model : models)
        hashes.push_back(algebra_hash(model));
    Json list = Json::array();
    for (const auto & family : families)
        list.push_back(Json{{"components", family.components}});
    return Json{{"models", std::move(hashes)}, {"families", std::move(list)}};
}

Json reconstruction_to_json(const Theory & theory, const ReconstructionReport & report,
    std::span<const FiniteAlgebra> models)
{
    Json hashes = Json::array();
    for (const auto & model : models)
        hashes.push_back(algebra_hash(model));

    Json cells = Json::array();
    for (const auto & cell : report.cells) {
        auto names = default_var_names(cell.n);
        Json term_ops = Json::array();
        for (const auto & tuple : cell.term_ops) {
            if (cell.m == 1)
                term_ops.push_back(format_term(tuple[0], names, theory.signature));
            else {
                Json rendered = Json::array();
                for (const auto & t : tuple)
                    rendered.push_back(format_term(t, names, theory.signature));
                term_ops.push_back(std::move(rendered));
            }
        }
        Json witnesses = Json::array();
        for (const auto & w : cell.witnesses)
            witnesses.push_back(Json{{"components", w.components}});
        Json cell_json{
            {"n", cell.n},
            {"m", cell.m},
            {"term_ops", std::move(term_ops)},
            {"natural_count", cell.natural_count},
            {"verdict", std::string(to_string(cell.verdict))},
            {"witnesses", std::move(witnesses)},
            {"term_dedup", cell.dedup_exact ? "exact" : "unresolved-at-bound"},
        };
        if (!cell.note.empty())
            cell_json["note"] = cell.note;
        cells.push_back(std::move(cell_json));
    }
    return Json{
        {"theory", report.theory_name},
        {"k", report.k},
        {"depth", report.depth},
        {"models", std::move(hashes)},
        {"cells", std::move(cells)},
    };
}

Json sieve_report_to_json(const SieveReport & report, std::span<const Equation> candidates)
{
    Json surviving = Json::array();
    for (int i : report.surviving)
        surviving.push_back(candidates[i].name);
    Json refuted = Json::array();
    for (const auto & [index, refutation] : report.refuted)
        refuted.push_back(Json{
            {"eq", candidates[index].name},
            {"model", algebra_hash(refutation.model)},
            {"size", refutation.model.size},
            {"env", refutation.env},
            {"lhs", refutation.lhs_value},
            {"rhs", refutation.rhs_value},
        });
    Json duplicates = Json::array();
    for (const auto & [dropped, kept] : report.duplicates)
        duplicates.push_back(Json{
            {"dropped", candidates[dropped].name},
            {"kept", candidates[kept].name},
        });
    return Json{
        {"k", report.k},
        {"surviving", std::move(surviving)},
        {"refuted", std::move(refuted)},
        {"duplicates", std::move(duplicates)},
    };
}

Json equivalence_to_json(const EquivalenceVerdict & verdict, const std::string & lhs,
    const std::string & rhs)
{
    Json out{{"lhs", lhs}, {"rhs", rhs}};
    if (const auto * valid = std::get_if<ValidUpTo>(&verdict)) {
        out["k"] = valid->k;
        out["verdict"] = "equivalent-up-to";
    }
    else {
        const auto & witness = std::get<Refutation>(verdict);
        out["verdict"] = "distinguished";
        out["model"] = algebra_hash(witness.model);
        out["size"] = witness.model.size;
        out["env"] = witness.env;
        out["lhs_value"] = witness.lhs_value;
        out["rhs_value"] = witness.rhs_value;
    }
    return out;
}

Json morphism_counterexample_to_json(const TheoryMorphism & f, const MorphismCounterexample & cx)
{
    return Json{
        {"morphism", f.name},
        {"eq", f.source->equations[cx.equation].name},
        {"model", algebra_hash(cx.model)},
        {"size", cx.model.size},
        {"env", cx.env},
        {"lhs", cx.lhs_value},
        {"rhs", cx.rhs_value},
    };
}

} // namespace lawv
