#ifndef LAWV_THEORY_HPP
#define LAWV_THEORY_HPP

#include <compare>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lawv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedTermError : Error {
    using Error::Error;
};

struct CompositionError : Error {
    using Error::Error;
};

struct IncompleteMorphismError : Error {
    using Error::Error;
};

struct EvaluationError : Error {
    using Error::Error;
};

/// An operation symbol of a signature. Arity 0 means a constant.
struct OperationSymbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const OperationSymbol &, const OperationSymbol &) = default;
};

using Signature = std::vector<OperationSymbol>;

/// A term over 0-based variable indices. Either a variable or an
/// application of a signature symbol (referenced by its index in the
/// signature) to exactly arity-many argument terms. Immutable value.
class Term {
public:
    Term() = default; // Var(0)

    static Term var(int index);
    static Term app(int symbol, std::vector<Term> args);

    bool is_var() const { return symbol_ < 0; }
    int var_index() const;
    int symbol() const;
    const std::vector<Term> &args() const { return args_; }

    /// Variables have depth 0; an application is one deeper than its
    /// deepest argument (constants have depth 1).
    int depth() const;
    /// Total number of nodes.
    int node_count() const;
    /// 1 + the largest variable index used, 0 for ground terms.
    int min_var_count() const;

    bool operator==(const Term &other) const;
    /// Total structural order: variables before applications, variables
    /// by index, applications by symbol then arguments lexicographically.
    std::strong_ordering operator<=>(const Term &other) const;

private:
    int symbol_ = -1; // -1 marks a variable
    int index_ = 0;   // variable index when symbol_ < 0
    std::vector<Term> args_;
};

/// Order used wherever a canonical representative term is picked:
/// by depth, then node count, then structural order.
bool simpler_term(const Term &a, const Term &b);

/// A universally quantified identity between two terms over var_count
/// shared variables. The name is carried for reporting only and is
/// ignored by structural comparison helpers.
struct Equation {
    std::string name;
    int var_count = 0;
    Term lhs;
    Term rhs;

    friend bool operator==(const Equation &, const Equation &) = default;
};

/// A presentation: named signature plus equations. Doubles as the
/// category whose objects are natural numbers and whose edges n -> m
/// are m-tuples of n-variable terms (LawvereMorphism below).
struct Theory {
    std::string name;
    Signature signature;
    std::vector<Equation> equations;

    /// Index of the named symbol, or -1.
    int symbol_index(std::string_view symbol_name) const;
    int arity(int symbol) const;

    /// Throws Error unless symbol names are distinct and every equation
    /// is well-formed over the signature.
    void validate() const;

    friend bool operator==(const Theory &, const Theory &) = default;
};

/// True iff every App matches its declared arity and every variable
/// index is below var_count.
bool well_formed(const Term &t, int var_count, const Signature &sig);

/// An edge n -> m of the theory category: an m-tuple of terms in n
/// variables. An edge n -> 1 is a classical n-ary operation.
struct LawvereMorphism {
    int domain = 0;
    std::vector<Term> components;

    int codomain() const { return static_cast<int>(components.size()); }
    static LawvereMorphism identity(int n);

    friend bool operator==(const LawvereMorphism &, const LawvereMorphism &) = default;
};

/// Simultaneous substitution: every Var(i) of t replaced by env[i].
/// Throws MalformedTermError if t uses a variable index >= env.size().
Term substitute(const Term &t, std::span<const Term> env);

/// Composition of edges by substitution: component i of the result is
/// g.components[i] with f.components substituted for its variables.
/// Throws CompositionError unless f.codomain() == g.domain.
LawvereMorphism compose(const LawvereMorphism &f, const LawvereMorphism &g);

/// An interpretation of one presentation in another: each source symbol
/// of arity a is assigned a target term over a variables.
struct TheoryMorphism {
    std::string name;
    std::shared_ptr<const Theory> source;
    std::shared_ptr<const Theory> target;
    std::vector<Term> assignment; // indexed by source symbol

    static TheoryMorphism identity(std::shared_ptr<const Theory> t);

    /// Throws Error unless the assignment is total and arity-respecting.
    void validate() const;
};

/// Rewrites a source-signature term into the target signature, leaving
/// variables untouched. Throws IncompleteMorphismError if a symbol has
/// no assignment.
Term translate(const TheoryMorphism &f, const Term &t);
Equation translate(const TheoryMorphism &f, const Equation &eq);

} // namespace lawv

#endif
