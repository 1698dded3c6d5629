#include "lawv/model.hpp"
#include "lawv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

namespace lawv {

namespace {

std::size_t power(int base, int exponent)
{
    std::size_t r = 1;
    for (int i = 0; i < exponent; ++i)
        r *= static_cast<std::size_t>(base);
    return r;
}

} // namespace

std::size_t tuple_rank(std::span<const int> inputs, int size)
{
    std::size_t r = 0;
    for (int v : inputs)
        r = r * static_cast<std::size_t>(size) + static_cast<std::size_t>(v);
    return r;
}

std::vector<int> tuple_unrank(std::size_t rank, int length, int size)
{
    std::vector<int> tuple(length, 0);
    for (int i = length - 1; i >= 0; --i) {
        tuple[i] = static_cast<int>(rank % size);
        rank /= size;
    }
    return tuple;
}

int FiniteAlgebra::apply(int symbol, std::span<const int> inputs) const
{
    return tables[symbol][tuple_rank(inputs, size)];
}

void check_shape(const FiniteAlgebra & a)
{
    if (!a.theory)
        throw Error("algebra has no theory");
    if (a.size < 0)
        throw Error("algebra has negative size");
    const auto & sig = a.theory->signature;
    if (a.tables.size() != sig.size())
        throw Error("algebra of '" + a.theory->name + "': expected " + std::to_string(sig.size()) +
            " tables, got " + std::to_string(a.tables.size()));
    for (std::size_t s = 0; s < sig.size(); ++s) {
        std::size_t want = power(a.size, sig[s].arity);
        if (a.size == 0 && sig[s].arity > 0)
            want = 0;
        if (a.tables[s].size() != want)
            throw Error("algebra of '" + a.theory->name + "': table for '" + sig[s].name +
                "' has " + std::to_string(a.tables[s].size()) + " entries, expected " + std::to_string(want));
        for (int v : a.tables[s])
            if (v < 0 || v >= a.size)
                throw Error("algebra of '" + a.theory->name + "': entry out of range in table for '" +
                    sig[s].name + "'");
    }
}

int evaluate(const FiniteAlgebra & a, const Term & t, std::span<const int> env)
{
    if (t.is_var()) {
        if (t.var_index() >= static_cast<int>(env.size()))
            throw EvaluationError("evaluate: variable index out of range");
        int v = env[t.var_index()];
        if (v < 0 || v >= a.size)
            throw EvaluationError("evaluate: environment value out of range");
        return v;
    }
    if (t.symbol() >= static_cast<int>(a.tables.size()))
        throw EvaluationError("evaluate: symbol index out of range");
    if (static_cast<int>(t.args().size()) != a.theory->signature[t.symbol()].arity)
        throw EvaluationError("evaluate: '" + a.theory->signature[t.symbol()].name +
            "' applied to " + std::to_string(t.args().size()) + " argument(s)");
    std::vector<int> inputs;
    inputs.reserve(t.args().size());
    for (const auto & arg : t.args())
        inputs.push_back(evaluate(a, arg, env));
    return a.apply(t.symbol(), inputs);
}

std::vector<Violation> check_model(const FiniteAlgebra & a)
{
    check_shape(a);
    std::vector<Violation> violations;
    const auto & equations = a.theory->equations;
    for (std::size_t e = 0; e < equations.size(); ++e) {
        const Equation & eq = equations[e];
        std::size_t envs = power(a.size, eq.var_count);
        if (a.size == 0 && eq.var_count > 0)
            envs = 0;
        for (std::size_t rank = 0; rank < envs; ++rank) {
            std::vector<int> env = tuple_unrank(rank, eq.var_count, a.size);
            int l = evaluate(a, eq.lhs, env);
            int r = evaluate(a, eq.rhs, env);
            if (l != r)
                violations.push_back(Violation{static_cast<int>(e), std::move(env), l, r});
        }
    }
    return violations;
}

FiniteAlgebra permute_algebra(const FiniteAlgebra & a, std::span<const int> perm)
{
    FiniteAlgebra out;
    out.theory = a.theory;
    out.size = a.size;
    out.tables.resize(a.tables.size());
    const auto & sig = a.theory->signature;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        int arity = sig[s].arity;
        out.tables[s].assign(a.tables[s].size(), 0);
        for (std::size_t rank = 0; rank < a.tables[s].size(); ++rank) {
            std::vector<int> in = tuple_unrank(rank, arity, a.size);
            for (int & v : in)
                v = perm[v];
            out.tables[s][tuple_rank(in, a.size)] = perm[a.tables[s][rank]];
        }
    }
    return out;
}

FiniteAlgebra canonicalize(const FiniteAlgebra & a)
{
    if (a.size <= 1)
        return a;
    std::vector<int> perm(a.size);
    std::iota(perm.begin(), perm.end(), 0);
    FiniteAlgebra best = a;
    while (std::next_permutation(perm.begin(), perm.end())) {
        FiniteAlgebra candidate = permute_algebra(a, perm);
        if (candidate.tables < best.tables)
            best = std::move(candidate);
    }
    return best;
}

namespace {

// Backtracking search over the table cells of one (theory, size) pair.
// Cells are filled in a fixed global order (symbols by ascending arity,
// then signature order; row-major within a table) so that constants and
// low-arity tables prune early. Every equation instance is re-checked as
// soon as it becomes evaluable and then never again (tables only grow),
// and an instance with one side known and the other blocked only at its
// root lookup forces that cell's value outright (so e.g. the unit laws
// pin a whole row and column the moment the unit element is chosen).
class ModelSearch {
public:
    ModelSearch(const std::shared_ptr<const Theory> & theory, int size,
        std::atomic<std::uint64_t> & nodes, std::uint64_t budget) :
        theory_(theory),
        size_(size),
        nodes_(nodes),
        budget_(budget)
    {
        const auto & sig = theory_->signature;
        std::vector<int> symbol_order(sig.size());
        std::iota(symbol_order.begin(), symbol_order.end(), 0);
        std::stable_sort(symbol_order.begin(), symbol_order.end(),
            [&](int x, int y) { return sig[x].arity < sig[y].arity; });
        for (int s : symbol_order)
            for (std::size_t i = 0; i < power(size_, sig[s].arity); ++i)
                cells_.emplace_back(s, i);
        for (std::size_t e = 0; e < theory_->equations.size(); ++e) {
            const Equation & eq = theory_->equations[e];
            for (std::size_t rank = 0; rank < power(size_, eq.var_count); ++rank)
                instances_.push_back(Instance{static_cast<int>(e), tuple_unrank(rank, eq.var_count, size_)});
        }
        tables_.resize(sig.size());
        for (std::size_t s = 0; s < sig.size(); ++s)
            tables_[s].assign(power(size_, sig[s].arity), -1);
        satisfied_.assign(instances_.size(), 0);
    }

    std::size_t cell_count() const { return cells_.size(); }

    // Feasible assignments of the first prefix_len cells, in search
    // order. Cells that propagation has already filled contribute their
    // forced value, so a prefix replays as a plain assignment list.
    std::vector<std::vector<int>> feasible_prefixes(std::size_t prefix_len)
    {
        std::vector<std::vector<int>> prefixes;
        if (!propagate())
            return prefixes;
        std::vector<int> values;
        prefix_dfs(prefix_len, values, prefixes);
        return prefixes;
    }

    // Completes the search below a prefix; found models are appended.
    void run(std::span<const int> prefix, std::vector<FiniteAlgebra> & out)
    {
        if (!propagate())
            return;
        bool ok = true;
        for (std::size_t i = 0; i < prefix.size() && ok; ++i)
            ok = try_assign(i, prefix[i]);
        if (ok)
            dfs(prefix.size(), out);
    }

private:
    struct Instance {
        int eq;
        std::vector<int> env;
    };

    struct Mark {
        std::size_t satisfied;
        std::size_t cells;
    };

    Mark mark() const { return {satisfied_trail_.size(), cell_trail_.size()}; }

    void undo_to(Mark m)
    {
        while (satisfied_trail_.size() > m.satisfied) {
            satisfied_[satisfied_trail_.back()] = 0;
            satisfied_trail_.pop_back();
        }
        while (cell_trail_.size() > m.cells) {
            auto [symbol, index] = cell_trail_.back();
            tables_[symbol][index] = -1;
            cell_trail_.pop_back();
        }
    }

    void prefix_dfs(std::size_t prefix_len, std::vector<int> & values,
        std::vector<std::vector<int>> & prefixes)
    {
        if (values.size() == prefix_len) {
            prefixes.push_back(values);
            return;
        }
        auto [symbol, index] = cells_[values.size()];
        if (tables_[symbol][index] >= 0) {
            values.push_back(tables_[symbol][index]);
            prefix_dfs(prefix_len, values, prefixes);
            values.pop_back();
            return;
        }
        Mark m = mark();
        for (int v = 0; v < size_; ++v) {
            if (try_assign(values.size(), v)) {
                values.push_back(v);
                prefix_dfs(prefix_len, values, prefixes);
                values.pop_back();
            }
            undo_to(m);
        }
    }

    void dfs(std::size_t cell, std::vector<FiniteAlgebra> & out)
    {
        if (cell == cells_.size()) {
            FiniteAlgebra a;
            a.theory = theory_;
            a.size = size_;
            a.tables = tables_;
            out.push_back(std::move(a));
            return;
        }
        auto [symbol, index] = cells_[cell];
        if (tables_[symbol][index] >= 0) {
            dfs(cell + 1, out);
            return;
        }
        Mark m = mark();
        for (int v = 0; v < size_; ++v) {
            if (try_assign(cell, v))
                dfs(cell + 1, out);
            undo_to(m);
        }
    }

    bool try_assign(std::size_t cell, int value)
    {
        auto [symbol, index] = cells_[cell];
        if (tables_[symbol][index] >= 0)
            return tables_[symbol][index] == value;
        return set_cell(symbol, index, value) && propagate();
    }

    bool set_cell(int symbol, std::size_t index, int value)
    {
        if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_)
            throw BoundError("model enumeration exceeded node budget of " + std::to_string(budget_),
                SearchStats{nodes_.load(), 0});
        tables_[symbol][index] = value;
        cell_trail_.emplace_back(symbol, index);
        return true;
    }

    bool propagate()
    {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < instances_.size(); ++i) {
                if (satisfied_[i])
                    continue;
                const Instance & inst = instances_[i];
                const Equation & eq = theory_->equations[inst.eq];
                int l = eval_partial(eq.lhs, inst.env);
                int r = eval_partial(eq.rhs, inst.env);
                if (l >= 0 && r >= 0) {
                    if (l != r)
                        return false;
                    satisfied_[i] = 1;
                    satisfied_trail_.push_back(i);
                }
                else if (l >= 0 && r < 0) {
                    if (!infer(eq.rhs, inst.env, l, i, progress))
                        return false;
                }
                else if (r >= 0 && l < 0) {
                    if (!infer(eq.lhs, inst.env, r, i, progress))
                        return false;
                }
            }
        }
        return true;
    }

    // t failed to evaluate; if the only blocker is its root lookup, the
    // instance forces that cell to `value`.
    bool infer(const Term & t, std::span<const int> env, int value, std::size_t instance,
        bool & progress)
    {
        std::size_t rank = 0;
        for (const auto & arg : t.args()) {
            int v = eval_partial(arg, env);
            if (v < 0)
                return true; // blocked deeper, nothing to force yet
            rank = rank * static_cast<std::size_t>(size_) + static_cast<std::size_t>(v);
        }
        if (!set_cell(t.symbol(), rank, value))
            return false;
        satisfied_[instance] = 1;
        satisfied_trail_.push_back(instance);
        progress = true;
        return true;
    }

    // -1 when some needed table cell is still unassigned.
    int eval_partial(const Term & t, std::span<const int> env) const
    {
        if (t.is_var())
            return env[t.var_index()];
        std::size_t rank = 0;
        for (const auto & arg : t.args()) {
            int v = eval_partial(arg, env);
            if (v < 0)
                return -1;
            rank = rank * static_cast<std::size_t>(size_) + static_cast<std::size_t>(v);
        }
        return tables_[t.symbol()][rank];
    }

    std::shared_ptr<const Theory> theory_;
    int size_;
    std::atomic<std::uint64_t> & nodes_;
    std::uint64_t budget_;
    std::vector<std::pair<int, std::size_t>> cells_;
    std::vector<Instance> instances_;
    std::vector<std::vector<int>> tables_;
    std::vector<char> satisfied_;
    std::vector<std::size_t> satisfied_trail_;
    std::vector<std::pair<int, std::size_t>> cell_trail_;
};

std::vector<FiniteAlgebra> enumerate_for_size(const std::shared_ptr<const Theory> & theory, int size,
    const EnumerationOptions & options, std::atomic<std::uint64_t> & nodes)
{
    if (size == 0) {
        // Consistent only without constants; equations then hold vacuously.
        for (const auto & sym : theory->signature)
            if (sym.arity == 0)
                return {};
        FiniteAlgebra empty;
        empty.theory = theory;
        empty.size = 0;
        empty.tables.assign(theory->signature.size(), {});
        return {empty};
    }

    ModelSearch probe(theory, size, nodes, options.node_budget);
    if (probe.cell_count() > 50'000'000)
        throw BoundError("table too large for size " + std::to_string(size), SearchStats{0, 0});

    // The work split is a fixed function of the problem, never of jobs,
    // so the merged output is identical for any worker count.
    std::size_t prefix_len = 0;
    if (size >= 2) {
        std::size_t combos = 1;
        while (prefix_len < probe.cell_count() && combos < 64) {
            combos *= static_cast<std::size_t>(size);
            ++prefix_len;
        }
    }
    std::vector<std::vector<int>> prefixes = probe.feasible_prefixes(prefix_len);

    std::vector<std::vector<FiniteAlgebra>> buckets(prefixes.size());
    parallel_for(options.jobs, static_cast<int>(prefixes.size()), [&](int i) {
        ModelSearch search(theory, size, nodes, options.node_budget);
        search.run(prefixes[i], buckets[i]);
    });

    std::vector<FiniteAlgebra> found;
    for (auto & bucket : buckets)
        for (auto & a : bucket)
            found.push_back(std::move(a));
    std::sort(found.begin(), found.end(),
        [](const FiniteAlgebra & a, const FiniteAlgebra & b) { return a.tables < b.tables; });

    if (options.up_to_iso) {
        std::vector<FiniteAlgebra> reps;
        for (auto & a : found)
            if (canonicalize(a).tables == a.tables)
                reps.push_back(std::move(a));
        return reps;
    }
    return found;
}

} // namespace

std::vector<FiniteAlgebra> enumerate_models(std::shared_ptr<const Theory> theory, int max_size,
    const EnumerationOptions & options, SearchStats * stats)
{
    theory->validate();
    if (max_size < 0 || (max_size == 0 && !options.allow_empty))
        throw Error("enumerate_models: size bound must be at least 1");

    std::atomic<std::uint64_t> nodes{0};
    std::vector<FiniteAlgebra> out;
    int first = options.exact_size ? max_size : (options.allow_empty ? 0 : 1);
    for (int size = first; size <= max_size; ++size) {
        auto found = enumerate_for_size(theory, size, options, nodes);
        for (auto & a : found)
            out.push_back(std::move(a));
        if (options.exact_size)
            break;
    }
    if (stats) {
        stats->nodes = nodes.load();
        stats->models = out.size();
    }
    return out;
}

} // namespace lawv
