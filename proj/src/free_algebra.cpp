#include "lawv/free_algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace lawv {

namespace {

class FreeBuilder {
public:
    FreeBuilder(std::shared_ptr<const Theory> theory, int generators, const FreeBounds & bounds) :
        theory_(std::move(theory)), n_(generators), bounds_(bounds)
    {
        for (int i = 0; i < n_; ++i) {
            parent_.push_back(i);
            best_term_.push_back(Term::var(i));
        }
    }

    FreeAlgebraResult build()
    {
        for (int depth = 1; depth <= bounds_.max_depth; ++depth) {
            if (!extend())
                return exceeded(depth);
            close();
            trace_.push_back(class_count());
            if (class_count() > bounds_.max_elements)
                return exceeded(depth);
            if (total())
                return finish();
        }
        return exceeded(bounds_.max_depth);
    }

private:
    int find(int x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int x, int y)
    {
        x = find(x);
        y = find(y);
        if (x == y)
            return;
        if (y < x)
            std::swap(x, y);
        parent_[y] = x;
        if (simpler_term(best_term_[y], best_term_[x]))
            best_term_[x] = best_term_[y];
    }

    int class_count()
    {
        int count = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i)
            if (find(static_cast<int>(i)) == static_cast<int>(i))
                ++count;
        return count;
    }

    std::vector<int> roots()
    {
        std::vector<int> out;
        for (std::size_t i = 0; i < parent_.size(); ++i)
            if (find(static_cast<int>(i)) == static_cast<int>(i))
                out.push_back(static_cast<int>(i));
        return out;
    }

    // Applies every operation to every tuple of current classes,
    // creating nodes for unseen applications. Extension may overshoot
    // the element bound (the coming close() can merge classes back
    // down), but gives up once the frontier is clearly explosive.
    bool extend()
    {
        std::vector<int> reps = roots();
        std::size_t created = 0;
        std::size_t cap = 4 * static_cast<std::size_t>(bounds_.max_elements) + 1024;
        const auto & sig = theory_->signature;
        for (std::size_t s = 0; s < sig.size(); ++s) {
            int arity = sig[s].arity;
            if (arity > 0 && reps.empty())
                continue;
            std::vector<int> pick(arity, 0);
            for (;;) {
                std::vector<int> key;
                key.reserve(arity + 1);
                key.push_back(static_cast<int>(s));
                for (int i = 0; i < arity; ++i)
                    key.push_back(reps[pick[i]]);
                if (!nodes_.count(key)) {
                    std::vector<Term> child_terms;
                    child_terms.reserve(arity);
                    for (int i = 0; i < arity; ++i)
                        child_terms.push_back(best_term_[key[i + 1]]);
                    int id = static_cast<int>(parent_.size());
                    parent_.push_back(id);
                    best_term_.push_back(Term::app(static_cast<int>(s), std::move(child_terms)));
                    nodes_.emplace(std::move(key), id);
                    if (reps.size() + ++created > cap)
                        return false;
                }
                int i = arity - 1;
                while (i >= 0 && ++pick[i] == static_cast<int>(reps.size())) {
                    pick[i] = 0;
                    --i;
                }
                if (i < 0)
                    break;
            }
        }
        return true;
    }

    // -1 when some application has no node yet.
    int eval(const Term & t, std::span<const int> env)
    {
        if (t.is_var())
            return find(env[t.var_index()]);
        std::vector<int> key;
        key.reserve(t.args().size() + 1);
        key.push_back(t.symbol());
        for (const auto & a : t.args()) {
            int c = eval(a, env);
            if (c < 0)
                return -1;
            key.push_back(c);
        }
        auto it = nodes_.find(key);
        return it == nodes_.end() ? -1 : find(it->second);
    }

    // Unites lhs/rhs classes of every equation instance that evaluates
    // on both sides, then restores congruence (equal canonical keys
    // force equal classes); repeats to a fixpoint. An instance only
    // fires when its structure already exists as nodes, so instances
    // are found by matching one side against the node store instead of
    // enumerating every tuple of classes.
    void close()
    {
        for (;;) {
            bool changed = false;
            for (const auto & eq : theory_->equations)
                if (instantiate(eq))
                    changed = true;
            if (rebuild_congruence())
                changed = true;
            if (!changed)
                return;
        }
    }

    bool instantiate(const Equation & eq)
    {
        // Match the structured side; a variable pattern matches every
        // class, so two bare variables just collapse everything.
        const Term & pattern = eq.lhs.is_var() ? eq.rhs : eq.lhs;
        const Term & other = eq.lhs.is_var() ? eq.lhs : eq.rhs;
        std::vector<int> reps = roots();
        bool changed = false;

        if (pattern.is_var()) {
            if (pattern.var_index() == other.var_index() || reps.size() <= 1)
                return false;
            for (std::size_t i = 1; i < reps.size(); ++i)
                unite(reps[0], reps[i]);
            return true;
        }

        // Snapshot of nodes grouped by (class, symbol).
        std::map<std::pair<int, int>, std::vector<std::pair<std::vector<int>, int>>> by_class;
        for (const auto & [key, node] : nodes_) {
            std::vector<int> children;
            for (std::size_t i = 1; i < key.size(); ++i)
                children.push_back(find(key[i]));
            by_class[{find(node), key[0]}].emplace_back(std::move(children), find(node));
        }

        std::vector<int> bindings(eq.var_count, -1);
        auto on_match = [&](int matched_class) {
            // Variables absent from the matched side range over all classes.
            std::vector<int> free_vars;
            for (int v = 0; v < eq.var_count; ++v)
                if (bindings[v] < 0)
                    free_vars.push_back(v);
            std::function<void(std::size_t)> assign_free = [&](std::size_t i) {
                if (i == free_vars.size()) {
                    int r = eval(other, bindings);
                    if (r >= 0 && find(matched_class) != r) {
                        unite(matched_class, r);
                        changed = true;
                    }
                    return;
                }
                for (int rep : reps) {
                    bindings[free_vars[i]] = rep;
                    assign_free(i + 1);
                }
            };
            assign_free(0);
            for (int v : free_vars)
                bindings[v] = -1;
        };

        // match(args of pattern against classes) with backtracking.
        std::function<void(const Term &, int, const std::function<void()> &)> match_class =
            [&](const Term & p, int cls, const std::function<void()> & k) {
                if (p.is_var()) {
                    int & slot = bindings[p.var_index()];
                    if (slot < 0) {
                        slot = cls;
                        k();
                        slot = -1;
                    }
                    else if (find(slot) == cls)
                        k();
                    return;
                }
                auto it = by_class.find({cls, p.symbol()});
                if (it == by_class.end())
                    return;
                for (const auto & [children, node_class] : it->second) {
                    std::function<void(std::size_t)> step = [&](std::size_t i) {
                        if (i == children.size()) {
                            k();
                            return;
                        }
                        match_class(p.args()[i], find(children[i]),
                            [&] { step(i + 1); });
                    };
                    step(0);
                }
            };

        for (const auto & [key, entries] : by_class) {
            if (key.second != pattern.symbol())
                continue;
            for (const auto & [children, node_class] : entries) {
                std::function<void(std::size_t)> step = [&](std::size_t i) {
                    if (i == children.size()) {
                        on_match(node_class);
                        return;
                    }
                    match_class(pattern.args()[i], find(children[i]), [&] { step(i + 1); });
                };
                step(0);
            }
        }
        return changed;
    }

    bool rebuild_congruence()
    {
        bool any = false;
        for (;;) {
            bool united = false;
            std::map<std::vector<int>, int> fresh;
            for (const auto & [key, node] : nodes_) {
                std::vector<int> canonical;
                canonical.reserve(key.size());
                canonical.push_back(key[0]);
                for (std::size_t i = 1; i < key.size(); ++i)
                    canonical.push_back(find(key[i]));
                auto it = fresh.find(canonical);
                if (it == fresh.end())
                    fresh.emplace(std::move(canonical), find(node));
                else if (find(it->second) != find(node)) {
                    unite(it->second, node);
                    united = true;
                }
            }
            nodes_.swap(fresh);
            if (!united)
                return any;
            any = true;
        }
    }

    bool total()
    {
        std::vector<int> reps = roots();
        const auto & sig = theory_->signature;
        for (std::size_t s = 0; s < sig.size(); ++s) {
            int arity = sig[s].arity;
            if (arity > 0 && reps.empty())
                continue;
            std::vector<int> pick(arity, 0);
            for (;;) {
                std::vector<int> key;
                key.push_back(static_cast<int>(s));
                for (int i = 0; i < arity; ++i)
                    key.push_back(find(reps[pick[i]]));
                if (!nodes_.count(key))
                    return false;
                int i = arity - 1;
                while (i >= 0 && ++pick[i] == static_cast<int>(reps.size())) {
                    pick[i] = 0;
                    --i;
                }
                if (i < 0)
                    break;
            }
        }
        return true;
    }

    FreeBoundExceeded exceeded(int depth)
    {
        int count = class_count();
        if (trace_.empty() || trace_.back() != count)
            trace_.push_back(count);
        return FreeBoundExceeded{count, depth, trace_};
    }

    FreeAlgebraResult finish()
    {
        std::vector<int> reps = roots();
        std::sort(reps.begin(), reps.end(),
            [&](int a, int b) { return simpler_term(best_term_[a], best_term_[b]); });
        std::vector<int> carrier_index(parent_.size(), -1);
        for (std::size_t i = 0; i < reps.size(); ++i)
            carrier_index[reps[i]] = static_cast<int>(i);

        FreeAlgebra result;
        result.algebra.theory = theory_;
        result.algebra.size = static_cast<int>(reps.size());
        const auto & sig = theory_->signature;
        result.algebra.tables.resize(sig.size());
        for (std::size_t s = 0; s < sig.size(); ++s) {
            int arity = sig[s].arity;
            std::size_t entries = 1;
            for (int i = 0; i < arity; ++i)
                entries *= reps.size();
            if (reps.empty() && arity > 0)
                entries = 0;
            result.algebra.tables[s].assign(entries, -1);
            std::vector<int> pick(arity, 0);
            for (std::size_t rank = 0; rank < entries; ++rank) {
                std::vector<int> key;
                key.push_back(static_cast<int>(s));
                std::size_t r = rank;
                for (int i = arity - 1; i >= 0; --i) {
                    pick[i] = static_cast<int>(r % reps.size());
                    r /= reps.size();
                }
                for (int i = 0; i < arity; ++i)
                    key.push_back(find(reps[pick[i]]));
                result.algebra.tables[s][rank] = carrier_index[find(nodes_.at(key))];
            }
        }
        for (int i = 0; i < n_; ++i)
            result.generators.push_back(carrier_index[find(i)]);
        for (int rep : reps)
            result.element_terms.push_back(best_term_[rep]);
        return result;
    }

    std::shared_ptr<const Theory> theory_;
    int n_;
    FreeBounds bounds_;
    std::vector<int> parent_;
    std::vector<Term> best_term_;
    std::map<std::vector<int>, int> nodes_;
    std::vector<int> trace_;
};

} // namespace

FreeAlgebraResult free_algebra(std::shared_ptr<const Theory> theory, int generators,
    const FreeBounds & bounds)
{
    theory->validate();
    if (generators < 0)
        throw Error("free_algebra: generator count must be non-negative");
    return FreeBuilder(std::move(theory), generators, bounds).build();
}

} // namespace lawv
