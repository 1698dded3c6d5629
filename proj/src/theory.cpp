#include "lawv/theory.hpp"

#include <algorithm>
#include <set>

namespace lawv {

Term Term::var(int index)
{
    if (index < 0)
        throw MalformedTermError("variable index must be non-negative");
    Term t;
    t.symbol_ = -1;
    t.index_ = index;
    return t;
}

Term Term::app(int symbol, std::vector<Term> args)
{
    if (symbol < 0)
        throw MalformedTermError("symbol index must be non-negative");
    Term t;
    t.symbol_ = symbol;
    t.index_ = 0;
    t.args_ = std::move(args);
    return t;
}

int Term::var_index() const
{
    if (!is_var())
        throw MalformedTermError("var_index() on an application");
    return index_;
}

int Term::symbol() const
{
    if (is_var())
        throw MalformedTermError("symbol() on a variable");
    return symbol_;
}

int Term::depth() const
{
    if (is_var())
        return 0;
    int d = 0;
    for (const auto & a : args_)
        d = std::max(d, a.depth());
    return d + 1;
}

int Term::node_count() const
{
    if (is_var())
        return 1;
    int n = 1;
    for (const auto & a : args_)
        n += a.node_count();
    return n;
}

int Term::min_var_count() const
{
    if (is_var())
        return index_ + 1;
    int n = 0;
    for (const auto & a : args_)
        n = std::max(n, a.min_var_count());
    return n;
}

bool Term::operator==(const Term & other) const
{
    return (*this <=> other) == std::strong_ordering::equal;
}

std::strong_ordering Term::operator<=>(const Term & other) const
{
    if (is_var() != other.is_var())
        return is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (is_var())
        return index_ <=> other.index_;
    if (auto c = symbol_ <=> other.symbol_; c != 0)
        return c;
    std::size_t n = std::min(args_.size(), other.args_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = args_[i] <=> other.args_[i]; c != 0)
            return c;
    return args_.size() <=> other.args_.size();
}

bool simpler_term(const Term & a, const Term & b)
{
    if (int c = a.depth() - b.depth(); c != 0)
        return c < 0;
    if (int c = a.node_count() - b.node_count(); c != 0)
        return c < 0;
    return a < b;
}

int Theory::symbol_index(std::string_view symbol_name) const
{
    for (std::size_t i = 0; i < signature.size(); ++i)
        if (signature[i].name == symbol_name)
            return static_cast<int>(i);
    return -1;
}

int Theory::arity(int symbol) const
{
    if (symbol < 0 || symbol >= static_cast<int>(signature.size()))
        throw Error("symbol index out of range for theory '" + name + "'");
    return signature[symbol].arity;
}

bool well_formed(const Term & t, int var_count, const Signature & sig)
{
    if (t.is_var())
        return t.var_index() < var_count;
    if (t.symbol() >= static_cast<int>(sig.size()))
        return false;
    if (static_cast<int>(t.args().size()) != sig[t.symbol()].arity)
        return false;
    for (const auto & a : t.args())
        if (!well_formed(a, var_count, sig))
            return false;
    return true;
}

void Theory::validate() const
{
    std::set<std::string> names;
    for (const auto & sym : signature) {
        if (sym.name.empty())
            throw Error("theory '" + name + "': empty operation name");
        if (sym.arity < 0)
            throw Error("theory '" + name + "': negative arity for '" + sym.name + "'");
        if (!names.insert(sym.name).second)
            throw Error("theory '" + name + "': duplicate operation '" + sym.name + "'");
    }
    for (const auto & eq : equations) {
        if (eq.var_count < 0)
            throw Error("theory '" + name + "': negative variable count in '" + eq.name + "'");
        if (!well_formed(eq.lhs, eq.var_count, signature) || !well_formed(eq.rhs, eq.var_count, signature))
            throw Error("theory '" + name + "': ill-formed equation '" + eq.name + "'");
    }
}

LawvereMorphism LawvereMorphism::identity(int n)
{
    LawvereMorphism m;
    m.domain = n;
    m.components.reserve(n);
    for (int i = 0; i < n; ++i)
        m.components.push_back(Term::var(i));
    return m;
}

Term substitute(const Term & t, std::span<const Term> env)
{
    if (t.is_var()) {
        if (t.var_index() >= static_cast<int>(env.size()))
            throw MalformedTermError("substitute: variable index " + std::to_string(t.var_index()) +
                " out of range for environment of size " + std::to_string(env.size()));
        return env[t.var_index()];
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto & a : t.args())
        args.push_back(substitute(a, env));
    return Term::app(t.symbol(), std::move(args));
}

LawvereMorphism compose(const LawvereMorphism & f, const LawvereMorphism & g)
{
    if (f.codomain() != g.domain)
        throw CompositionError("compose: codomain " + std::to_string(f.codomain()) +
            " does not match domain " + std::to_string(g.domain));
    LawvereMorphism r;
    r.domain = f.domain;
    r.components.reserve(g.components.size());
    for (const auto & c : g.components)
        r.components.push_back(substitute(c, f.components));
    return r;
}

TheoryMorphism TheoryMorphism::identity(std::shared_ptr<const Theory> t)
{
    TheoryMorphism m;
    m.name = "identity";
    m.source = t;
    m.target = std::move(t);
    for (std::size_t s = 0; s < m.source->signature.size(); ++s) {
        std::vector<Term> vars;
        for (int i = 0; i < m.source->signature[s].arity; ++i)
            vars.push_back(Term::var(i));
        m.assignment.push_back(Term::app(static_cast<int>(s), std::move(vars)));
    }
    return m;
}

void TheoryMorphism::validate() const
{
    if (!source || !target)
        throw Error("theory morphism '" + name + "': missing source or target");
    if (assignment.size() != source->signature.size())
        throw IncompleteMorphismError("theory morphism '" + name + "': assignment not total (" +
            std::to_string(assignment.size()) + " of " + std::to_string(source->signature.size()) + " symbols)");
    for (std::size_t s = 0; s < assignment.size(); ++s)
        if (!well_formed(assignment[s], source->signature[s].arity, target->signature))
            throw Error("theory morphism '" + name + "': image of '" + source->signature[s].name +
                "' is not a well-formed target term over " +
                std::to_string(source->signature[s].arity) + " variables");
}

Term translate(const TheoryMorphism & f, const Term & t)
{
    if (t.is_var())
        return t;
    if (t.symbol() >= static_cast<int>(f.assignment.size()))
        throw IncompleteMorphismError("translate: no assignment for symbol index " + std::to_string(t.symbol()));
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto & a : t.args())
        args.push_back(translate(f, a));
    return substitute(f.assignment[t.symbol()], args);
}

Equation translate(const TheoryMorphism & f, const Equation & eq)
{
    return Equation{eq.name, eq.var_count, translate(f, eq.lhs), translate(f, eq.rhs)};
}

} // namespace lawv
