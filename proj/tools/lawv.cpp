#include <lawv/cache.hpp>
#include <lawv/clone.hpp>
#include <lawv/dsl.hpp>
#include <lawv/free_algebra.hpp>
#include <lawv/hash.hpp>
#include <lawv/hom.hpp>
#include <lawv/json_io.hpp>
#include <lawv/model.hpp>
#include <lawv/sieve.hpp>

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

namespace {

using namespace lawv;

// Thrown after the payload has already been written, to finish with a
// specific exit code.
struct ExitWith {
    int code;
};

struct CommonOptions {
    int jobs = 1;
    std::string cache_dir;
    bool no_cache = false;
    bool pretty = false;
    bool stats = false;
    std::string output = "-";
    std::uint64_t node_budget = 2'000'000'000;
};

void add_common(CLI::App * sub, CommonOptions & options)
{
    sub->add_option("--jobs", options.jobs, "Worker threads (output is identical for any count)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--cache-dir", options.cache_dir, "Model cache directory");
    sub->add_flag("--no-cache", options.no_cache, "Compute without reading or writing the cache");
    sub->add_flag("--pretty", options.pretty, "Also print a human summary on stderr");
    sub->add_flag("--stats", options.stats, "Print cache statistics on stderr");
    sub->add_option("-o,--output", options.output, "Write data to this path instead of stdout");
    sub->add_option("--node-budget", options.node_budget, "Search node budget before giving up");
}

class Output {
public:
    explicit Output(const std::string & path)
    {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw Error("cannot open output file '" + path + "'");
        }
    }

    std::ostream & stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

CacheConfig cache_config(const CommonOptions & options)
{
    CacheConfig config;
    config.disabled = options.no_cache;
    config.directory = options.cache_dir.empty() ? default_cache_dir()
                                                 : std::filesystem::path(options.cache_dir);
    return config;
}

std::shared_ptr<const Theory> load_theory(const std::string & path)
{
    std::string text = read_text_file(path);
    try {
        return std::make_shared<const Theory>(parse_theory(text));
    }
    catch (const ParseError & e) {
        throw Error(path + ":" + e.what());
    }
}

std::vector<Equation> load_candidates(const std::string & path, const Theory & theory)
{
    std::string text = read_text_file(path);
    try {
        return parse_candidates(text, theory);
    }
    catch (const ParseError & e) {
        throw Error(path + ":" + e.what());
    }
}

// Loads an algebra record and refuses records that are not models of
// their theory (the violations are the payload, exit code 1).
FiniteAlgebra load_algebra(const std::string & path, std::shared_ptr<const Theory> theory,
    Output & output)
{
    Json record;
    try {
        record = Json::parse(read_text_file(path));
    }
    catch (const nlohmann::json::exception & e) {
        throw Error(path + ": invalid JSON: " + e.what());
    }
    FiniteAlgebra algebra = algebra_from_json(record, std::move(theory));
    auto violations = check_model(algebra);
    if (!violations.empty()) {
        Json payload{
            {"model", path},
            {"ok", false},
            {"violations", violations_to_json(algebra, violations)},
        };
        output.stream() << payload.dump() << "\n";
        std::cerr << path << ": not a model of '" << algebra.theory->name << "' ("
                  << violations.size() << " violated equation instance(s))\n";
        throw ExitWith{1};
    }
    return algebra;
}

std::vector<FiniteAlgebra> cached_models(const CommonOptions & options,
    std::shared_ptr<const Theory> theory, int k, bool up_to_iso)
{
    CacheStats stats;
    EnumerationOptions enumeration;
    enumeration.jobs = options.jobs;
    enumeration.node_budget = options.node_budget;
    auto models = cache_get_or_compute(cache_config(options), std::move(theory), k, up_to_iso,
        enumeration, &stats);
    if (options.stats)
        std::cerr << "cache: " << stats.hits << " hit(s), " << stats.misses << " miss(es)\n";
    return models;
}

// Bare identifiers become variables in order of first appearance.
std::vector<std::string> infer_variables(std::string_view text)
{
    std::vector<std::string> names;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            std::size_t next = i;
            while (next < text.size() && std::isspace(static_cast<unsigned char>(text[next])))
                ++next;
            if (next >= text.size() || text[next] != '(') {
                std::string name(text.substr(start, i - start));
                if (std::find(names.begin(), names.end(), name) == names.end())
                    names.push_back(std::move(name));
            }
        }
        else {
            ++i;
        }
    }
    return names;
}

int run_check(const std::string & theory_file, const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    Json ops = Json::array();
    for (const auto & sym : theory->signature)
        ops.push_back(Json{{"name", sym.name}, {"arity", sym.arity}});
    Json eqs = Json::array();
    for (const auto & eq : theory->equations)
        eqs.push_back(eq.name);
    Json payload{
        {"theory", theory->name},
        {"theory_hash", theory_hash(*theory)},
        {"operations", std::move(ops)},
        {"equations", std::move(eqs)},
        {"ok", true},
    };
    output.stream() << payload.dump() << "\n";
    if (options.pretty)
        std::cerr << "theory " << theory->name << ": " << theory->signature.size()
                  << " operation(s), " << theory->equations.size() << " equation(s)\n";
    return 0;
}

int run_models(const std::string & theory_file, int max_size, bool exact, bool up_to_iso,
    const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    auto models = cached_models(options, theory, max_size, up_to_iso);
    std::size_t emitted = 0;
    for (const auto & model : models) {
        if (exact && model.size != max_size)
            continue;
        output.stream() << algebra_to_json(model).dump() << "\n";
        ++emitted;
    }
    if (options.pretty)
        std::cerr << emitted << " model(s) of " << theory->name
                  << (up_to_iso ? " up to isomorphism" : "") << "\n";
    return 0;
}

int run_homs(const std::string & theory_file, const std::string & from_file,
    const std::string & to_file, bool isos_only, const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    FiniteAlgebra a = load_algebra(from_file, theory, output);
    FiniteAlgebra b = load_algebra(to_file, theory, output);
    auto homs = enumerate_homs(a, b, isos_only);
    for (const auto & h : homs)
        output.stream() << hom_to_json(h).dump() << "\n";
    if (options.pretty)
        std::cerr << homs.size() << " homomorphism(s)\n";
    return 0;
}

int run_auts(const std::string & theory_file, const std::string & model_file,
    const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    FiniteAlgebra a = load_algebra(model_file, theory, output);
    auto auts = automorphism_group(a);
    for (const auto & h : auts)
        output.stream() << hom_to_json(h).dump() << "\n";
    if (options.pretty)
        std::cerr << auts.size() << " automorphism(s)\n";
    return 0;
}

int run_free(const std::string & theory_file, int generators, const FreeBounds & bounds,
    const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    FreeAlgebraResult result = free_algebra(theory, generators, bounds);
    output.stream() << free_result_to_json(*theory, generators, result).dump() << "\n";
    if (const auto * finite = std::get_if<FreeAlgebra>(&result)) {
        if (options.pretty)
            std::cerr << "free algebra on " << generators << " generator(s): finite with "
                      << finite->algebra.size << " element(s)\n";
        return 0;
    }
    const auto & exceeded = std::get<FreeBoundExceeded>(result);
    if (options.pretty)
        std::cerr << "free algebra on " << generators << " generator(s): still "
                  << exceeded.classes_found << " classes and growing at depth "
                  << exceeded.depth_reached << "\n";
    return 3;
}

int run_clone(const std::string & theory_file, int arity, int coarity, int max_size,
    const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    ModelCategory category = build_category(cached_models(options, theory, max_size, true));
    CloneBounds bounds;
    bounds.node_budget = options.node_budget;
    auto families = natural_families(category, arity, coarity, bounds);
    Json payload{
        {"theory", theory->name},
        {"n", arity},
        {"m", coarity},
        {"k", max_size},
        {"count", families.size()},
    };
    Json rendered = families_to_json(category.models, families);
    payload["models"] = std::move(rendered["models"]);
    payload["families"] = std::move(rendered["families"]);
    output.stream() << payload.dump() << "\n";
    if (options.pretty)
        std::cerr << families.size() << " natural famil(y/ies) U^" << arity << " => U^" << coarity
                  << " over models of size <= " << max_size << "\n";
    return 0;
}

int run_reconstruct(const std::string & theory_file, int n_max, int m_max, int max_size, int depth,
    const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    auto models = cached_models(options, theory, max_size, true);
    std::vector<FiniteAlgebra> category_models = models; // report keeps its own list for hashes
    CloneBounds bounds;
    bounds.node_budget = options.node_budget;
    ReconstructionReport report = reconstruct_theory(theory, std::move(category_models), n_max,
        m_max, max_size, depth, bounds, options.jobs);
    output.stream() << reconstruction_to_json(*theory, report, models).dump() << "\n";
    bool bound_exceeded = false, extra = false;
    for (const auto & cell : report.cells) {
        bound_exceeded |= cell.verdict == CellVerdict::BoundExceeded;
        extra |= cell.verdict == CellVerdict::ExtraNatural;
        if (options.pretty)
            std::cerr << "n=" << cell.n << " m=" << cell.m << ": " << to_string(cell.verdict)
                      << " (" << cell.term_ops.size() << " term op(s), " << cell.natural_count
                      << " natural)\n";
    }
    return bound_exceeded ? 3 : extra ? 1 : 0;
}

int run_sieve(const std::string & theory_file, const std::string & candidates_file, int max_size,
    const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    auto candidates = load_candidates(candidates_file, *theory);
    Output output(options.output);
    auto models = cached_models(options, theory, max_size, true);
    SieveReport report = sieve_candidates(candidates, models, max_size, options.jobs);
    output.stream() << sieve_report_to_json(report, candidates).dump() << "\n";
    if (options.pretty) {
        for (int i : report.surviving)
            std::cerr << candidates[i].name << ": valid up to size " << max_size << "\n";
        for (const auto & [i, refutation] : report.refuted)
            std::cerr << candidates[i].name << ": refuted at size " << refutation.model.size << "\n";
        for (const auto & [dropped, kept] : report.duplicates)
            std::cerr << candidates[dropped].name << ": duplicate of " << candidates[kept].name << "\n";
    }
    return report.refuted.empty() ? 0 : 1;
}

int run_equiv(const std::string & theory_file, const std::string & lhs_text,
    const std::string & rhs_text, int max_size, const CommonOptions & options)
{
    auto theory = load_theory(theory_file);
    Output output(options.output);
    std::vector<std::string> vars = infer_variables(lhs_text);
    for (const auto & name : infer_variables(rhs_text))
        if (std::find(vars.begin(), vars.end(), name) == vars.end())
            vars.push_back(name);
    Term lhs, rhs;
    try {
        lhs = parse_term(lhs_text, *theory, vars);
        rhs = parse_term(rhs_text, *theory, vars);
    }
    catch (const ParseError & e) {
        throw Error(std::string("term: ") + e.what());
    }
    auto models = cached_models(options, theory, max_size, true);
    auto verdict = syntactic_equivalence(lhs, rhs, static_cast<int>(vars.size()), models, max_size);
    output.stream() << equivalence_to_json(verdict, lhs_text, rhs_text).dump() << "\n";
    if (options.pretty)
        std::cerr << (std::holds_alternative<ValidUpTo>(verdict)
                             ? "equivalent on every model of size <= " + std::to_string(max_size)
                             : "distinguished")
                  << "\n";
    return std::holds_alternative<ValidUpTo>(verdict) ? 0 : 1;
}

int run_restrict(const std::string & morphism_file, const std::string & model_file,
    const CommonOptions & options)
{
    std::string base_dir = std::filesystem::path(morphism_file).parent_path().string();
    TheoryMorphism morphism;
    try {
        morphism = parse_theory_morphism(read_text_file(morphism_file), base_dir);
    }
    catch (const ParseError & e) {
        throw Error(morphism_file + ":" + e.what());
    }
    Output output(options.output);
    FiniteAlgebra model = load_algebra(model_file, morphism.target, output);
    try {
        FiniteAlgebra restricted = restrict_along(morphism, model);
        output.stream() << algebra_to_json(restricted).dump() << "\n";
        if (options.pretty)
            std::cerr << "restricted to a " << morphism.source->name << " model of size "
                      << restricted.size << "\n";
        return 0;
    }
    catch (const InvalidMorphismError & e) {
        Json payload{{"ok", false},
            {"counterexample", morphism_counterexample_to_json(morphism, e.counterexample)}};
        output.stream() << payload.dump() << "\n";
        std::cerr << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Finite models, homomorphisms and natural-family reconstruction for algebraic theories"};
    app.require_subcommand(1);

    CommonOptions options;
    std::function<int()> action;

    {
        auto * sub = app.add_subcommand("check", "Parse and validate a theory file");
        auto file = std::make_shared<std::string>();
        sub->add_option("file", *file, "Theory file")->required();
        add_common(sub, options);
        sub->callback([&, file] { action = [&, file] { return run_check(*file, options); }; });
    }
    {
        auto * sub = app.add_subcommand("models", "Enumerate finite models");
        auto file = std::make_shared<std::string>();
        auto max_size = std::make_shared<int>(0);
        auto exact = std::make_shared<bool>(false);
        auto iso = std::make_shared<bool>(false);
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--max-size", *max_size, "Carrier size bound")->required()
            ->check(CLI::PositiveNumber);
        sub->add_flag("--exact", *exact, "Only the exact size instead of 1..max");
        sub->add_flag("--up-to-iso", *iso, "One canonical representative per isomorphism class");
        add_common(sub, options);
        sub->callback([&, file, max_size, exact, iso] {
            action = [&, file, max_size, exact, iso] {
                return run_models(*file, *max_size, *exact, *iso, options);
            };
        });
    }
    {
        auto * sub = app.add_subcommand("homs", "Enumerate homomorphisms between two models");
        auto file = std::make_shared<std::string>();
        auto from = std::make_shared<std::string>();
        auto to = std::make_shared<std::string>();
        auto isos = std::make_shared<bool>(false);
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--from", *from, "Source algebra JSON")->required();
        sub->add_option("--to", *to, "Target algebra JSON")->required();
        sub->add_flag("--isos-only", *isos, "Only bijective homomorphisms");
        add_common(sub, options);
        sub->callback([&, file, from, to, isos] {
            action = [&, file, from, to, isos] {
                return run_homs(*file, *from, *to, *isos, options);
            };
        });
    }
    {
        auto * sub = app.add_subcommand("auts", "Enumerate the automorphism group of a model");
        auto file = std::make_shared<std::string>();
        auto model = std::make_shared<std::string>();
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--model", *model, "Algebra JSON")->required();
        add_common(sub, options);
        sub->callback([&, file, model] {
            action = [&, file, model] { return run_auts(*file, *model, options); };
        });
    }
    {
        auto * sub = app.add_subcommand("free", "Build the free algebra on n generators");
        auto file = std::make_shared<std::string>();
        auto generators = std::make_shared<int>(0);
        auto bounds = std::make_shared<FreeBounds>();
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--generators", *generators, "Number of generators")->required()
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--max-elements", bounds->max_elements, "Class bound before giving up");
        sub->add_option("--max-depth", bounds->max_depth, "Term-depth bound before giving up");
        add_common(sub, options);
        sub->callback([&, file, generators, bounds] {
            action = [&, file, generators, bounds] {
                return run_free(*file, *generators, *bounds, options);
            };
        });
    }
    {
        auto * sub = app.add_subcommand("clone", "Enumerate natural families U^n => U^m");
        auto file = std::make_shared<std::string>();
        auto arity = std::make_shared<int>(0);
        auto coarity = std::make_shared<int>(1);
        auto max_size = std::make_shared<int>(0);
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--arity", *arity, "n")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--coarity", *coarity, "m")->required()->check(CLI::PositiveNumber);
        sub->add_option("--max-size", *max_size, "Model size bound")->required()
            ->check(CLI::PositiveNumber);
        add_common(sub, options);
        sub->callback([&, file, arity, coarity, max_size] {
            action = [&, file, arity, coarity, max_size] {
                return run_clone(*file, *arity, *coarity, *max_size, options);
            };
        });
    }
    {
        auto * sub = app.add_subcommand("reconstruct",
            "Compare the term clone against the natural families");
        auto file = std::make_shared<std::string>();
        auto n_max = std::make_shared<int>(0);
        auto m_max = std::make_shared<int>(1);
        auto max_size = std::make_shared<int>(0);
        auto depth = std::make_shared<int>(3);
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--max-arity", *n_max, "Largest n")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--max-coarity", *m_max, "Largest m")->required()->check(CLI::PositiveNumber);
        sub->add_option("--max-size", *max_size, "Model size bound")->required()
            ->check(CLI::PositiveNumber);
        sub->add_option("--depth", *depth, "Term depth bound for the clone");
        add_common(sub, options);
        sub->callback([&, file, n_max, m_max, max_size, depth] {
            action = [&, file, n_max, m_max, max_size, depth] {
                return run_reconstruct(*file, *n_max, *m_max, *max_size, *depth, options);
            };
        });
    }
    {
        auto * sub = app.add_subcommand("sieve", "Filter candidate equations by validity");
        auto file = std::make_shared<std::string>();
        auto candidates = std::make_shared<std::string>();
        auto max_size = std::make_shared<int>(0);
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--candidates", *candidates, "Candidate equation file")->required();
        sub->add_option("--max-size", *max_size, "Model size bound")->required()
            ->check(CLI::PositiveNumber);
        add_common(sub, options);
        sub->callback([&, file, candidates, max_size] {
            action = [&, file, candidates, max_size] {
                return run_sieve(*file, *candidates, *max_size, options);
            };
        });
    }
    {
        auto * sub = app.add_subcommand("equiv", "Bounded semantic equivalence of two terms");
        auto file = std::make_shared<std::string>();
        auto lhs = std::make_shared<std::string>();
        auto rhs = std::make_shared<std::string>();
        auto max_size = std::make_shared<int>(0);
        sub->add_option("file", *file, "Theory file")->required();
        sub->add_option("--lhs", *lhs, "Left term")->required();
        sub->add_option("--rhs", *rhs, "Right term")->required();
        sub->add_option("--max-size", *max_size, "Model size bound")->required()
            ->check(CLI::PositiveNumber);
        add_common(sub, options);
        sub->callback([&, file, lhs, rhs, max_size] {
            action = [&, file, lhs, rhs, max_size] {
                return run_equiv(*file, *lhs, *rhs, *max_size, options);
            };
        });
    }
    {
        auto * sub = app.add_subcommand("restrict", "Restrict a model along a theory morphism");
        auto morphism = std::make_shared<std::string>();
        auto model = std::make_shared<std::string>();
        sub->add_option("--morphism", *morphism, "Theory morphism file")->required();
        sub->add_option("--model", *model, "Algebra JSON of the target theory")->required();
        add_common(sub, options);
        sub->callback([&, morphism, model] {
            action = [&, morphism, model] { return run_restrict(*morphism, *model, options); };
        });
    }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    }
    catch (const ExitWith & e) {
        return e.code;
    }
    catch (const BoundError & e) {
        std::cerr << "error: " << e.what() << " (after " << e.stats.nodes << " nodes)\n";
        return 3;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
