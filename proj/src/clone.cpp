#include "lawv/clone.hpp"
#include "lawv/parallel.hpp"
#include "lawv/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

namespace lawv {

namespace {

std::size_t power(int base, int exponent)
{
    std::size_t r = 1;
    for (int i = 0; i < exponent; ++i)
        r *= static_cast<std::size_t>(base);
    return r;
}

std::vector<int> flatten(const NaturalFamily & family)
{
    std::vector<int> flat;
    for (const auto & component : family.components)
        flat.insert(flat.end(), component.begin(), component.end());
    return flat;
}

// Constraint search over the component cells of a candidate family.
// A cell is one output coordinate of one environment of one model;
// assigning it forces cells along every hom out of that model.
class FamilySearch {
public:
    FamilySearch(const ModelCategory & cat, int n, int m, std::uint64_t budget) :
        cat_(cat), n_(n), m_(m), budget_(budget)
    {
        offsets_.reserve(cat_.models.size());
        std::size_t total = 0;
        for (const auto & model : cat_.models) {
            offsets_.push_back(total);
            total += power(model.size, n_) * static_cast<std::size_t>(m_);
        }
        value_.assign(total, -1);
        cell_model_.assign(total, 0);
        for (std::size_t i = 0; i < cat_.models.size(); ++i) {
            std::size_t begin = offsets_[i];
            std::size_t end = i + 1 < offsets_.size() ? offsets_[i + 1] : total;
            for (std::size_t c = begin; c < end; ++c)
                cell_model_[c] = static_cast<int>(i);
        }

        // Per hom: env rank -> rank of the image environment.
        arcs_.reserve(cat_.homs.size());
        for (std::size_t h = 0; h < cat_.homs.size(); ++h) {
            auto [si, ti] = cat_.endpoints[h];
            Arc arc;
            arc.source = si;
            arc.target = ti;
            arc.map = &cat_.homs[h].map;
            std::size_t envs = power(cat_.models[si].size, n_);
            arc.env_map.resize(envs);
            std::vector<int> mapped(n_, 0);
            for (std::size_t rank = 0; rank < envs; ++rank) {
                std::size_t r = rank;
                for (int v = n_ - 1; v >= 0; --v) {
                    mapped[v] = cat_.homs[h].map[static_cast<int>(r % cat_.models[si].size)];
                    r /= cat_.models[si].size;
                }
                arc.env_map[rank] = tuple_rank(mapped, cat_.models[ti].size);
            }
            arcs_.push_back(std::move(arc));
        }
        arcs_from_.resize(cat_.models.size());
        for (std::size_t a = 0; a < arcs_.size(); ++a)
            arcs_from_[arcs_[a].source].push_back(static_cast<int>(a));
    }

    std::vector<NaturalFamily> run()
    {
        dfs(0);
        return std::move(found_);
    }

private:
    struct Arc {
        int source = 0;
        int target = 0;
        const std::vector<int> * map = nullptr;
        std::vector<std::size_t> env_map;
    };

    bool assign_and_propagate(std::size_t cell, int v)
    {
        queue_.clear();
        if (!assign(cell, v))
            return false;
        while (!queue_.empty()) {
            std::size_t c = queue_.back();
            queue_.pop_back();
            int model = cell_model_[c];
            std::size_t local = c - offsets_[model];
            std::size_t rank = local / static_cast<std::size_t>(m_);
            std::size_t coord = local % static_cast<std::size_t>(m_);
            for (int a : arcs_from_[model]) {
                const Arc & arc = arcs_[a];
                std::size_t target_cell =
                    offsets_[arc.target] + arc.env_map[rank] * static_cast<std::size_t>(m_) + coord;
                if (!assign(target_cell, (*arc.map)[value_[c]]))
                    return false;
            }
        }
        return true;
    }

    bool assign(std::size_t cell, int v)
    {
        if (value_[cell] >= 0)
            return value_[cell] == v;
        if (++nodes_ > budget_)
            throw BoundError("natural-family search exceeded node budget of " + std::to_string(budget_),
                SearchStats{nodes_, static_cast<std::uint64_t>(found_.size())});
        value_[cell] = v;
        trail_.push_back(cell);
        queue_.push_back(cell);
        return true;
    }

    void undo_to(std::size_t mark)
    {
        while (trail_.size() > mark) {
            value_[trail_.back()] = -1;
            trail_.pop_back();
        }
    }

    void dfs(std::size_t from)
    {
        std::size_t cell = from;
        while (cell < value_.size() && value_[cell] >= 0)
            ++cell;
        if (cell == value_.size()) {
            emit();
            return;
        }
        int size = cat_.models[cell_model_[cell]].size;
        std::size_t mark = trail_.size();
        for (int v = 0; v < size; ++v) {
            if (assign_and_propagate(cell, v))
                dfs(cell + 1);
            undo_to(mark);
        }
    }

    void emit()
    {
        NaturalFamily family;
        family.arity = n_;
        family.coarity = m_;
        family.components.reserve(cat_.models.size());
        for (std::size_t i = 0; i < cat_.models.size(); ++i) {
            std::size_t begin = offsets_[i];
            std::size_t end = i + 1 < offsets_.size() ? offsets_[i + 1] : value_.size();
            family.components.emplace_back(value_.begin() + begin, value_.begin() + end);
        }
        found_.push_back(std::move(family));
    }

    const ModelCategory & cat_;
    int n_, m_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<int> cell_model_;
    std::vector<int> value_;
    std::vector<std::size_t> trail_;
    std::vector<std::size_t> queue_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> arcs_from_;
    std::vector<NaturalFamily> found_;
};

// The Yoneda route needs F(n) to actually live inside the category, so
// an empty free algebra does not qualify (the size-0 model is excluded
// from enumeration by default).
bool free_algebra_fits(const FreeAlgebraResult & result, int max_model_size)
{
    const auto * finite = std::get_if<FreeAlgebra>(&result);
    return finite && finite->algebra.size >= 1 && finite->algebra.size <= max_model_size;
}

// Term dedup by agreement on models <= k is provably exact as soon as
// F(n) is finite with at most k elements: evaluation at the free
// algebra separates inequivalent terms. Size 0 means no terms at all.
bool dedup_is_exact(const FreeAlgebraResult & result, int k)
{
    const auto * finite = std::get_if<FreeAlgebra>(&result);
    return finite && finite->algebra.size <= k;
}

std::vector<NaturalFamily> natural_families_impl(const ModelCategory & category, int n, int m,
    const CloneBounds & bounds, const FreeAlgebraResult * precomputed_free)
{
    if (category.models.empty()) {
        NaturalFamily empty;
        empty.arity = n;
        empty.coarity = m;
        return {empty};
    }
    int max_size = 0;
    for (const auto & model : category.models)
        max_size = std::max(max_size, model.size);

    FreeAlgebraResult local = FreeBoundExceeded{};
    if (!precomputed_free) {
        local = free_algebra(category.models.front().theory, n, bounds.free);
        precomputed_free = &local;
    }

    std::vector<NaturalFamily> families;
    if (free_algebra_fits(*precomputed_free, max_size)) {
        // Yoneda route: a natural family is determined by where it
        // sends the generators of F(n), so the candidates are exactly
        // the m-tuples of elements of U(F(n)), i.e. of their canonical
        // terms, evaluated everywhere. Each candidate is still
        // validated against every hom.
        const auto & free_result = std::get<FreeAlgebra>(*precomputed_free);
        int elements = free_result.algebra.size;
        std::vector<int> pick(m, 0);
        for (;;) {
            std::vector<Term> tuple;
            tuple.reserve(m);
            for (int j = 0; j < m; ++j)
                tuple.push_back(free_result.element_terms[pick[j]]);
            NaturalFamily candidate = induced_family(tuple, n, category.models);
            if (!check_naturality(candidate, category.models, category.homs))
                families.push_back(std::move(candidate));
            int j = m - 1;
            while (j >= 0 && ++pick[j] == elements) {
                pick[j] = 0;
                --j;
            }
            if (j < 0)
                break;
        }
    }
    else {
        families = FamilySearch(category, n, m, bounds.node_budget).run();
    }

    std::sort(families.begin(), families.end(),
        [](const NaturalFamily & a, const NaturalFamily & b) { return a.components < b.components; });
    return families;
}

} // namespace

std::vector<Term> enumerate_terms(const Signature & sig, int n, int max_depth)
{
    std::vector<Term> pool;
    for (int i = 0; i < n; ++i)
        pool.push_back(Term::var(i));
    std::size_t previous_start = 0;
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::size_t pool_end = pool.size();
        std::vector<Term> fresh;
        for (std::size_t s = 0; s < sig.size(); ++s) {
            int arity = sig[s].arity;
            if (arity == 0) {
                if (depth == 1)
                    fresh.push_back(Term::app(static_cast<int>(s), {}));
                continue;
            }
            if (pool_end == 0)
                continue;
            // Tuples over the pool with at least one argument from the
            // newest layer, so every generated term has exact depth.
            std::vector<std::size_t> pick(arity, 0);
            for (;;) {
                bool uses_new = false;
                for (int i = 0; i < arity; ++i)
                    if (pick[i] >= previous_start)
                        uses_new = true;
                if (uses_new) {
                    std::vector<Term> args;
                    args.reserve(arity);
                    for (int i = 0; i < arity; ++i)
                        args.push_back(pool[pick[i]]);
                    fresh.push_back(Term::app(static_cast<int>(s), std::move(args)));
                }
                int i = arity - 1;
                while (i >= 0 && ++pick[i] == pool_end) {
                    pick[i] = 0;
                    --i;
                }
                if (i < 0 || pool_end == 0)
                    break;
            }
        }
        previous_start = pool_end;
        for (auto & t : fresh)
            pool.push_back(std::move(t));
        if (pool.size() == previous_start)
            break; // nothing new can ever appear
    }
    return pool;
}

NaturalFamily induced_family(const Term & t, int arity, std::span<const FiniteAlgebra> models)
{
    return induced_family(std::span<const Term>(&t, 1), arity, models);
}

NaturalFamily induced_family(std::span<const Term> tuple, int arity,
    std::span<const FiniteAlgebra> models)
{
    NaturalFamily family;
    family.arity = arity;
    family.coarity = static_cast<int>(tuple.size());
    family.components.reserve(models.size());
    for (const auto & model : models) {
        std::size_t envs = power(model.size, arity);
        if (model.size == 0 && arity > 0)
            envs = 0;
        std::vector<int> table(envs * tuple.size(), 0);
        for (std::size_t rank = 0; rank < envs; ++rank) {
            std::vector<int> env = tuple_unrank(rank, arity, model.size);
            for (std::size_t j = 0; j < tuple.size(); ++j)
                table[rank * tuple.size() + j] = evaluate(model, tuple[j], env);
        }
        family.components.push_back(std::move(table));
    }
    return family;
}

std::vector<NaturalFamily> natural_families(const ModelCategory & category, int n, int m,
    const CloneBounds & bounds)
{
    return natural_families_impl(category, n, m, bounds, nullptr);
}

std::vector<NaturalFamily> natural_families(std::shared_ptr<const Theory> theory, int n, int m,
    int k, const CloneBounds & bounds)
{
    EnumerationOptions options;
    options.up_to_iso = true;
    ModelCategory category = build_category(enumerate_models(std::move(theory), k, options));
    return natural_families_impl(category, n, m, bounds, nullptr);
}

std::string_view to_string(CellVerdict verdict)
{
    switch (verdict) {
    case CellVerdict::Equal: return "EQUAL";
    case CellVerdict::ExtraNatural: return "EXTRA_NATURAL";
    case CellVerdict::BoundExceeded: return "BOUND_EXCEEDED";
    }
    return "BOUND_EXCEEDED";
}

ReconstructionReport reconstruct_theory(std::shared_ptr<const Theory> theory,
    std::vector<FiniteAlgebra> models, int n_max, int m_max, int k, int depth,
    const CloneBounds & bounds, int jobs)
{
    if (n_max < 0 || m_max < 1 || k < 1 || depth < 0)
        throw Error("reconstruct_theory: parameters out of range");
    theory->validate();

    ReconstructionReport report;
    report.theory_name = theory->name;
    report.k = k;
    report.depth = depth;

    ModelCategory category = build_category(std::move(models));

    // Everything that depends only on n is shared across coarities.
    struct PerArity {
        FreeAlgebraResult free = FreeBoundExceeded{};
        std::vector<Term> class_reps;               // canonical term per semantic class
        std::vector<std::vector<int>> class_tables; // flattened coarity-1 family per class
    };
    std::vector<PerArity> per_arity(n_max + 1);
    parallel_for(jobs, n_max + 1, [&](int n) {
        PerArity & slot = per_arity[n];
        slot.free = free_algebra(theory, n, bounds.free);
        std::set<std::vector<int>> seen;
        for (const auto & term : enumerate_terms(theory->signature, n, depth)) {
            NaturalFamily family = induced_family(term, n, category.models);
            if (seen.insert(flatten(family)).second) {
                slot.class_reps.push_back(term);
                slot.class_tables.push_back(flatten(family));
            }
        }
    });

    report.cells.resize(static_cast<std::size_t>(n_max + 1) * m_max);
    parallel_for(jobs, static_cast<int>(report.cells.size()), [&](int index) {
        int n = index / m_max;
        int m = index % m_max + 1;
        const PerArity & shared = per_arity[n];
        ReconstructionCell cell;
        cell.n = n;
        cell.m = m;
        cell.dedup_exact = dedup_is_exact(shared.free, k);

        std::size_t class_count = shared.class_reps.size();
        std::set<std::vector<int>> term_tables;
        if (class_count > 0 || m == 0) {
            std::vector<int> pick(m, 0);
            for (;;) {
                std::vector<Term> tuple;
                tuple.reserve(m);
                for (int j = 0; j < m; ++j)
                    tuple.push_back(shared.class_reps[pick[j]]);
                term_tables.insert(flatten(induced_family(tuple, n, category.models)));
                cell.term_ops.push_back(std::move(tuple));
                int j = m - 1;
                while (j >= 0 && ++pick[j] == static_cast<int>(class_count)) {
                    pick[j] = 0;
                    --j;
                }
                if (j < 0)
                    break;
            }
        }

        try {
            auto natural = natural_families_impl(category, n, m, bounds, &shared.free);
            cell.natural_count = static_cast<int>(natural.size());
            for (auto & family : natural)
                if (!term_tables.count(flatten(family)))
                    cell.witnesses.push_back(std::move(family));
            cell.verdict = cell.witnesses.empty() && natural.size() == cell.term_ops.size()
                ? CellVerdict::Equal
                : CellVerdict::ExtraNatural;
        }
        catch (const BoundError & e) {
            cell.verdict = CellVerdict::BoundExceeded;
            cell.note = e.what();
        }
        report.cells[index] = std::move(cell);
    });
    return report;
}

ReconstructionReport reconstruct_theory(std::shared_ptr<const Theory> theory,
    int n_max, int m_max, int k, int depth, const CloneBounds & bounds, int jobs)
{
    EnumerationOptions options;
    options.up_to_iso = true;
    options.jobs = jobs;
    auto models = enumerate_models(theory, k, options);
    return reconstruct_theory(std::move(theory), std::move(models), n_max, m_max, k, depth,
        bounds, jobs);
}

std::optional<MorphismCounterexample> validate_theory_morphism(const TheoryMorphism & f, int k)
{
    f.validate();
    EnumerationOptions options;
    options.up_to_iso = true;
    auto models = enumerate_models(f.target, k, options);
    for (std::size_t e = 0; e < f.source->equations.size(); ++e) {
        SieveVerdict verdict = check_validity(translate(f, f.source->equations[e]), models, k);
        if (auto * refutation = std::get_if<Refutation>(&verdict))
            return MorphismCounterexample{static_cast<int>(e), std::move(refutation->model),
                std::move(refutation->env), refutation->lhs_value, refutation->rhs_value};
    }
    return std::nullopt;
}

FiniteAlgebra restrict_along(const TheoryMorphism & f, const FiniteAlgebra & b)
{
    f.validate();
    check_shape(b);
    if (!(b.theory == f.target || *b.theory == *f.target))
        throw Error("restrict_along: model is not an algebra of the morphism's target theory");

    FiniteAlgebra out;
    out.theory = f.source;
    out.size = b.size;
    const auto & sig = f.source->signature;
    out.tables.resize(sig.size());
    for (std::size_t s = 0; s < sig.size(); ++s) {
        int arity = sig[s].arity;
        std::size_t entries = power(b.size, arity);
        if (b.size == 0 && arity > 0)
            entries = 0;
        out.tables[s].assign(entries, 0);
        for (std::size_t rank = 0; rank < entries; ++rank)
            out.tables[s][rank] = evaluate(b, f.assignment[s], tuple_unrank(rank, arity, b.size));
    }

    auto violations = check_model(out);
    if (!violations.empty()) {
        const Violation & v = violations.front();
        throw InvalidMorphismError("restrict_along: '" + f.name + "' breaks source equation '" +
                f.source->equations[v.equation].name + "' on this model",
            MorphismCounterexample{v.equation, b, v.env, v.lhs_value, v.rhs_value});
    }
    return out;
}

} // namespace lawv
