#include "lawv/hom.hpp"

#include <algorithm>

namespace lawv {

namespace {

std::size_t power(int base, int exponent)
{
    std::size_t r = 1;
    for (int i = 0; i < exponent; ++i)
        r *= static_cast<std::size_t>(base);
    return r;
}

void require_same_theory(const FiniteAlgebra & a, const FiniteAlgebra & b)
{
    if (!a.theory || !b.theory || !(a.theory == b.theory || *a.theory == *b.theory))
        throw Error("homomorphism endpoints must share a theory");
}

// Backtracking over images of carrier elements in carrier order, with
// closure propagation: whenever every input of an operation instance is
// mapped, the image of its output is forced.
class HomSearch {
public:
    HomSearch(const FiniteAlgebra & a, const FiniteAlgebra & b, bool only_bijective) :
        a_(a), b_(b), bijective_(only_bijective),
        map_(a.size, -1), used_(b.size, 0)
    {
    }

    std::vector<std::vector<int>> run()
    {
        if (bijective_ && a_.size != b_.size)
            return {};
        // Constants force their images before any branching.
        const auto & sig = a_.theory->signature;
        for (std::size_t s = 0; s < sig.size(); ++s)
            if (sig[s].arity == 0 && !assign(a_.tables[s][0], b_.tables[s][0]))
                return {};
        if (!propagate())
            return {};
        search();
        return std::move(found_);
    }

private:
    bool assign(int element, int image)
    {
        if (map_[element] >= 0)
            return map_[element] == image;
        if (bijective_ && used_[image])
            return false;
        map_[element] = image;
        used_[image] = 1;
        return true;
    }

    bool propagate()
    {
        const auto & sig = a_.theory->signature;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t s = 0; s < sig.size(); ++s) {
                int arity = sig[s].arity;
                if (arity == 0)
                    continue;
                std::vector<int> tuple(arity, 0), image(arity, 0);
                std::size_t count = power(a_.size, arity);
                for (std::size_t rank = 0; rank < count; ++rank) {
                    bool all_mapped = true;
                    std::size_t r = rank;
                    for (int i = arity - 1; i >= 0; --i) {
                        tuple[i] = static_cast<int>(r % a_.size);
                        r /= a_.size;
                        int m = map_[tuple[i]];
                        if (m < 0)
                            all_mapped = false;
                        else
                            image[i] = m;
                    }
                    if (!all_mapped)
                        continue;
                    int out = a_.tables[s][rank];
                    int forced = b_.apply(static_cast<int>(s), image);
                    if (map_[out] < 0) {
                        if (!assign(out, forced))
                            return false;
                        changed = true;
                    }
                    else if (map_[out] != forced)
                        return false;
                }
            }
        }
        return true;
    }

    void search()
    {
        int element = -1;
        for (int i = 0; i < a_.size; ++i)
            if (map_[i] < 0) {
                element = i;
                break;
            }
        if (element < 0) {
            found_.push_back(map_);
            return;
        }
        std::vector<int> saved_map = map_;
        std::vector<char> saved_used = used_;
        for (int image = 0; image < b_.size; ++image) {
            if (assign(element, image) && propagate())
                search();
            map_ = saved_map;
            used_ = saved_used;
        }
    }

    const FiniteAlgebra & a_;
    const FiniteAlgebra & b_;
    bool bijective_;
    std::vector<int> map_;
    std::vector<char> used_;
    std::vector<std::vector<int>> found_;
};

} // namespace

std::optional<FailedSquare> homomorphism_failure(std::span<const int> map,
    const FiniteAlgebra & a, const FiniteAlgebra & b)
{
    require_same_theory(a, b);
    if (static_cast<int>(map.size()) != a.size)
        throw Error("homomorphism map has wrong length");
    for (int v : map)
        if (v < 0 || v >= b.size)
            throw Error("homomorphism map value out of range");
    const auto & sig = a.theory->signature;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        int arity = sig[s].arity;
        std::size_t count = power(a.size, arity);
        std::vector<int> image(arity, 0);
        for (std::size_t rank = 0; rank < count; ++rank) {
            std::vector<int> tuple = tuple_unrank(rank, arity, a.size);
            for (int i = 0; i < arity; ++i)
                image[i] = map[tuple[i]];
            if (map[a.tables[s][rank]] != b.apply(static_cast<int>(s), image))
                return FailedSquare{static_cast<int>(s), std::move(tuple)};
        }
    }
    return std::nullopt;
}

bool is_homomorphism(std::span<const int> map, const FiniteAlgebra & a, const FiniteAlgebra & b)
{
    return !homomorphism_failure(map, a, b).has_value();
}

std::vector<Homomorphism> enumerate_homs(const FiniteAlgebra & a, const FiniteAlgebra & b,
    bool only_bijective)
{
    require_same_theory(a, b);
    check_shape(a);
    check_shape(b);
    HomSearch search(a, b, only_bijective);
    std::vector<Homomorphism> out;
    for (auto & map : search.run())
        out.push_back(Homomorphism{&a, &b, std::move(map)});
    return out;
}

std::vector<Homomorphism> automorphism_group(const FiniteAlgebra & a)
{
    std::vector<Homomorphism> auts = enumerate_homs(a, a, true);

    // Re-check the group structure: identity, closure, inverses.
    auto contains = [&](const std::vector<int> & map) {
        return std::any_of(auts.begin(), auts.end(),
            [&](const Homomorphism & h) { return h.map == map; });
    };
    std::vector<int> identity(a.size);
    for (int i = 0; i < a.size; ++i)
        identity[i] = i;
    if (!contains(identity))
        throw Error("automorphism_group: identity missing");
    for (const auto & f : auts) {
        std::vector<int> inverse(a.size, -1);
        for (int i = 0; i < a.size; ++i)
            inverse[f.map[i]] = i;
        if (!contains(inverse))
            throw Error("automorphism_group: not closed under inverse");
        for (const auto & g : auts) {
            std::vector<int> composite(a.size);
            for (int i = 0; i < a.size; ++i)
                composite[i] = g.map[f.map[i]];
            if (!contains(composite))
                throw Error("automorphism_group: not closed under composition");
        }
    }
    return auts;
}

std::optional<NaturalityFailure> check_naturality(const NaturalFamily & family,
    std::span<const FiniteAlgebra> models, std::span<const Homomorphism> homs)
{
    if (family.components.size() != models.size())
        throw Error("natural family has " + std::to_string(family.components.size()) +
            " components for " + std::to_string(models.size()) + " models");
    int n = family.arity, m = family.coarity;
    for (std::size_t i = 0; i < models.size(); ++i)
        if (family.components[i].size() != power(models[i].size, n) * static_cast<std::size_t>(m))
            throw Error("natural family component " + std::to_string(i) + " has the wrong shape");

    auto index_of = [&](const FiniteAlgebra * p) -> int {
        for (std::size_t i = 0; i < models.size(); ++i)
            if (&models[i] == p)
                return static_cast<int>(i);
        return -1;
    };

    for (std::size_t h = 0; h < homs.size(); ++h) {
        const Homomorphism & f = homs[h];
        int si = index_of(f.source), ti = index_of(f.target);
        if (si < 0 || ti < 0)
            throw MissingAlgebraError("check_naturality: hom endpoint not among the family's models");
        int sa = models[si].size;
        std::size_t envs = power(sa, n);
        std::vector<int> env(n, 0), mapped(n, 0);
        for (std::size_t rank = 0; rank < envs; ++rank) {
            std::size_t r = rank;
            for (int i = n - 1; i >= 0; --i) {
                env[i] = static_cast<int>(r % sa);
                r /= sa;
                mapped[i] = f.map[env[i]];
            }
            std::size_t mapped_rank = tuple_rank(mapped, models[ti].size);
            for (int j = 0; j < m; ++j)
                if (f.map[family.components[si][rank * m + j]] !=
                    family.components[ti][mapped_rank * m + j])
                    return NaturalityFailure{static_cast<int>(h), env};
        }
    }
    return std::nullopt;
}

ModelCategory build_category(std::vector<FiniteAlgebra> models)
{
    ModelCategory cat;
    cat.models = std::move(models);
    for (std::size_t i = 0; i < cat.models.size(); ++i)
        for (std::size_t j = 0; j < cat.models.size(); ++j)
            for (auto & h : enumerate_homs(cat.models[i], cat.models[j])) {
                cat.homs.push_back(std::move(h));
                cat.endpoints.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
    return cat;
}

} // namespace lawv
