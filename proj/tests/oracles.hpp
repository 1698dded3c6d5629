#ifndef LAWV_TESTS_ORACLES_HPP
#define LAWV_TESTS_ORACLES_HPP

// Brute-force reference implementations the fast engines are checked
// against. These deliberately avoid the search machinery under test:
// everything here is generate-and-filter.

#include <lawv/dsl.hpp>
#include <lawv/hom.hpp>
#include <lawv/model.hpp>

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>
#include <span>
#include <vector>

namespace oracles {

inline std::shared_ptr<const lawv::Theory> parse(const char * text)
{
    return std::make_shared<const lawv::Theory>(lawv::parse_theory(text));
}

inline std::size_t power(int base, int exponent)
{
    std::size_t r = 1;
    for (int i = 0; i < exponent; ++i)
        r *= static_cast<std::size_t>(base);
    return r;
}

// Every table assignment of the given size, filtered through
// check_model. Emitted in lexicographic order of the flattened tables.
inline std::vector<lawv::FiniteAlgebra> naive_models(std::shared_ptr<const lawv::Theory> theory,
    int size)
{
    std::vector<std::size_t> table_sizes;
    std::size_t total_cells = 0;
    for (const auto & sym : theory->signature) {
        table_sizes.push_back(power(size, sym.arity));
        total_cells += table_sizes.back();
    }
    std::vector<lawv::FiniteAlgebra> out;
    std::vector<int> cells(total_cells, 0);
    for (;;) {
        lawv::FiniteAlgebra a;
        a.theory = theory;
        a.size = size;
        std::size_t offset = 0;
        for (std::size_t s = 0; s < table_sizes.size(); ++s) {
            a.tables.emplace_back(cells.begin() + offset, cells.begin() + offset + table_sizes[s]);
            offset += table_sizes[s];
        }
        if (lawv::check_model(a).empty())
            out.push_back(std::move(a));
        int i = static_cast<int>(total_cells) - 1;
        while (i >= 0 && ++cells[i] == size)
            cells[i--] = 0;
        if (i < 0)
            break;
    }
    return out;
}

// Direct isomorphism test: try every carrier bijection and transport
// tables by hand.
inline bool isomorphic(const lawv::FiniteAlgebra & a, const lawv::FiniteAlgebra & b)
{
    if (a.size != b.size)
        return false;
    std::vector<int> perm(a.size);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t s = 0; ok && s < a.tables.size(); ++s) {
            int arity = a.theory->signature[s].arity;
            for (std::size_t rank = 0; ok && rank < a.tables[s].size(); ++rank) {
                std::vector<int> tuple = lawv::tuple_unrank(rank, arity, a.size);
                for (int & v : tuple)
                    v = perm[v];
                if (perm[a.tables[s][rank]] != b.tables[s][lawv::tuple_rank(tuple, b.size)])
                    ok = false;
            }
        }
        if (ok)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

inline std::vector<lawv::FiniteAlgebra> pairwise_iso_dedup(std::vector<lawv::FiniteAlgebra> models)
{
    std::vector<lawv::FiniteAlgebra> reps;
    for (auto & model : models) {
        bool fresh = std::none_of(reps.begin(), reps.end(),
            [&](const lawv::FiniteAlgebra & rep) { return isomorphic(rep, model); });
        if (fresh)
            reps.push_back(std::move(model));
    }
    return reps;
}

// All |B|^|A| maps filtered by a direct commuting-square scan.
inline std::vector<std::vector<int>> brute_homs(const lawv::FiniteAlgebra & a,
    const lawv::FiniteAlgebra & b)
{
    std::vector<std::vector<int>> out;
    std::vector<int> map(a.size, 0);
    if (b.size == 0 && a.size > 0)
        return out;
    for (;;) {
        bool ok = true;
        for (std::size_t s = 0; ok && s < a.tables.size(); ++s) {
            int arity = a.theory->signature[s].arity;
            for (std::size_t rank = 0; ok && rank < power(a.size, arity); ++rank) {
                std::vector<int> tuple = lawv::tuple_unrank(rank, arity, a.size);
                std::vector<int> image(arity);
                for (int i = 0; i < arity; ++i)
                    image[i] = map[tuple[i]];
                if (map[a.tables[s][rank]] != b.tables[s][lawv::tuple_rank(image, b.size)])
                    ok = false;
            }
        }
        if (ok)
            out.push_back(map);
        int i = a.size - 1;
        while (i >= 0 && ++map[i] == b.size)
            map[i--] = 0;
        if (i < 0 || a.size == 0)
            break;
    }
    return out;
}

// All natural families over the category's models by straightforward
// cell assignment; after each assignment every square both of whose
// cells are known is re-verified. No propagation, no free algebras.
class BruteFamilySearch {
public:
    BruteFamilySearch(const lawv::ModelCategory & cat, int n, int m) : cat_(cat), n_(n), m_(m)
    {
        for (const auto & model : cat_.models) {
            offsets_.push_back(total_);
            total_ += power(model.size, n_) * static_cast<std::size_t>(m_);
        }
        value_.assign(total_, -1);
    }

    std::vector<std::vector<std::vector<int>>> run()
    {
        dfs(0);
        return found_;
    }

private:
    bool consistent() const
    {
        for (std::size_t h = 0; h < cat_.homs.size(); ++h) {
            auto [si, ti] = cat_.endpoints[h];
            const auto & map = cat_.homs[h].map;
            int sa = cat_.models[si].size;
            for (std::size_t rank = 0; rank < power(sa, n_); ++rank) {
                std::vector<int> env = lawv::tuple_unrank(rank, n_, sa);
                for (int & v : env)
                    v = map[v];
                std::size_t mapped = lawv::tuple_rank(env, cat_.models[ti].size);
                for (int j = 0; j < m_; ++j) {
                    int lhs = value_[offsets_[si] + rank * m_ + j];
                    int rhs = value_[offsets_[ti] + mapped * m_ + j];
                    if (lhs >= 0 && rhs >= 0 && map[lhs] != rhs)
                        return false;
                }
            }
        }
        return true;
    }

    void dfs(std::size_t cell)
    {
        if (cell == total_) {
            std::vector<std::vector<int>> components;
            for (std::size_t i = 0; i < cat_.models.size(); ++i) {
                std::size_t end = i + 1 < offsets_.size() ? offsets_[i + 1] : total_;
                components.emplace_back(value_.begin() + offsets_[i], value_.begin() + end);
            }
            found_.push_back(std::move(components));
            return;
        }
        int model = 0;
        while (model + 1 < static_cast<int>(offsets_.size()) && offsets_[model + 1] <= cell)
            ++model;
        for (int v = 0; v < cat_.models[model].size; ++v) {
            value_[cell] = v;
            if (consistent())
                dfs(cell + 1);
            value_[cell] = -1;
        }
    }

    const lawv::ModelCategory & cat_;
    int n_, m_;
    std::size_t total_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<int> value_;
    std::vector<std::vector<std::vector<int>>> found_;
};

inline std::vector<std::vector<std::vector<int>>> brute_families(const lawv::ModelCategory & cat,
    int n, int m)
{
    auto found = BruteFamilySearch(cat, n, m).run();
    std::sort(found.begin(), found.end());
    return found;
}

// Semilattice-term normal form: under associativity, commutativity and
// idempotence a meet-term is exactly the set of variables it touches.
inline void aci_vars(const lawv::Term & t, std::set<int> & out)
{
    if (t.is_var()) {
        out.insert(t.var_index());
        return;
    }
    for (const auto & a : t.args())
        aci_vars(a, out);
}

inline std::set<std::set<int>> aci_classes(const std::vector<lawv::Term> & terms)
{
    std::set<std::set<int>> classes;
    for (const auto & t : terms) {
        std::set<int> vars;
        aci_vars(t, vars);
        classes.insert(std::move(vars));
    }
    return classes;
}

} // namespace oracles

#endif
