#include "lawv/sieve.hpp"
#include "lawv/parallel.hpp"

#include <algorithm>
#include <limits>
#include <map>
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

std::vector<FiniteAlgebra> models_up_to(const Theory & theory, int k, EnumerationOptions options)
{
    options.up_to_iso = true;
    options.exact_size = false;
    return enumerate_models(std::make_shared<Theory>(theory), k, options);
}

// Serialization of (lhs, rhs) under a variable renaming; the minimum
// over all renamings is the alpha-equivalence class key.
void encode_term(const Term & t, const std::vector<int> & renaming, std::vector<int> & out)
{
    if (t.is_var()) {
        out.push_back(-1 - renaming[t.var_index()]);
        return;
    }
    out.push_back(t.symbol());
    out.push_back(static_cast<int>(t.args().size()));
    for (const auto & a : t.args())
        encode_term(a, renaming, out);
}

std::vector<int> alpha_key(const Equation & eq)
{
    std::vector<int> renaming(eq.var_count);
    std::iota(renaming.begin(), renaming.end(), 0);
    std::vector<int> best;
    do {
        std::vector<int> current;
        current.push_back(eq.var_count);
        encode_term(eq.lhs, renaming, current);
        current.push_back(std::numeric_limits<int>::max()); // side separator
        encode_term(eq.rhs, renaming, current);
        if (best.empty() || current < best)
            best = std::move(current);
    } while (std::next_permutation(renaming.begin(), renaming.end()));
    return best;
}

} // namespace

SieveVerdict check_validity(const Equation & eq, std::span<const FiniteAlgebra> models, int k)
{
    for (const auto & model : models) {
        if (!well_formed(eq.lhs, eq.var_count, model.theory->signature) ||
            !well_formed(eq.rhs, eq.var_count, model.theory->signature))
            throw Error("check_validity: equation '" + eq.name + "' is not well-formed over the signature");
        std::size_t envs = power(model.size, eq.var_count);
        if (model.size == 0 && eq.var_count > 0)
            envs = 0;
        for (std::size_t rank = 0; rank < envs; ++rank) {
            std::vector<int> env = tuple_unrank(rank, eq.var_count, model.size);
            int l = evaluate(model, eq.lhs, env);
            int r = evaluate(model, eq.rhs, env);
            if (l != r)
                return Refutation{model, std::move(env), l, r};
        }
    }
    return ValidUpTo{k};
}

SieveVerdict check_validity(const Theory & theory, const Equation & eq, int k,
    const EnumerationOptions & options)
{
    auto models = models_up_to(theory, k, options);
    return check_validity(eq, models, k);
}

SieveReport sieve_candidates(std::span<const Equation> candidates,
    std::span<const FiniteAlgebra> models, int k, int jobs)
{
    SieveReport report;
    report.k = k;

    // Collapse structural and alpha-variant duplicates first.
    std::map<std::vector<int>, int> seen;
    std::vector<int> fresh;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto [it, inserted] = seen.emplace(alpha_key(candidates[i]), static_cast<int>(i));
        if (inserted)
            fresh.push_back(static_cast<int>(i));
        else
            report.duplicates.emplace_back(static_cast<int>(i), it->second);
    }

    std::vector<SieveVerdict> verdicts(fresh.size(), SieveVerdict{ValidUpTo{k}});
    parallel_for(jobs, static_cast<int>(fresh.size()), [&](int i) {
        verdicts[i] = check_validity(candidates[fresh[i]], models, k);
    });

    for (std::size_t i = 0; i < fresh.size(); ++i) {
        if (std::holds_alternative<ValidUpTo>(verdicts[i]))
            report.surviving.push_back(fresh[i]);
        else
            report.refuted.emplace_back(fresh[i], std::get<Refutation>(std::move(verdicts[i])));
    }
    return report;
}

SieveReport sieve_candidates(const Theory & theory, std::span<const Equation> candidates,
    int k, int jobs)
{
    auto models = models_up_to(theory, k, EnumerationOptions{.jobs = jobs});
    return sieve_candidates(candidates, models, k, jobs);
}

EquivalenceVerdict syntactic_equivalence(const Term & lhs, const Term & rhs, int var_count,
    std::span<const FiniteAlgebra> models, int k)
{
    return check_validity(Equation{"equivalence", var_count, lhs, rhs}, models, k);
}

EquivalenceVerdict syntactic_equivalence(const Theory & theory, const Term & lhs, const Term & rhs,
    int var_count, int k)
{
    auto models = models_up_to(theory, k, {});
    return syntactic_equivalence(lhs, rhs, var_count, models, k);
}

} // namespace lawv
