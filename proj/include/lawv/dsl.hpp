#ifndef LAWV_DSL_HPP
#define LAWV_DSL_HPP

#include <lawv/theory.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace lawv {

struct SourceSpan {
    int line = 1;   // 1-based
    int column = 1; // 1-based
    int length = 0;
};

enum class ParseErrorKind {
    UnknownSymbol,
    ArityMismatch,
    UnboundVariable,
    DuplicateName,
    Syntax
};

std::string_view to_string(ParseErrorKind kind);

/// Thrown by the parsing entry points; kind plus span locate the fault.
struct ParseError : Error {
    ParseError(SourceSpan span, ParseErrorKind kind, const std::string & message);

    SourceSpan span;
    ParseErrorKind kind;
};

/// Parses the line-oriented theory format:
///
///   theory <Name>
///     op <name> : <arity>
///     eq <name> (<vars>) : <term> = <term>
///   end
///
/// '#' starts a comment. The variable list binds names to indices in
/// declaration order; constants are written with empty parentheses.
Theory parse_theory(std::string_view text);

/// Parses a candidate-equation file: bare `eq` lines against the given
/// theory's signature. Duplicates are preserved.
std::vector<Equation> parse_candidates(std::string_view text, const Theory & theory);

/// Parses a single term over the named variables (bound to indices in
/// the given order).
Term parse_term(std::string_view text, const Theory & theory,
    const std::vector<std::string> & var_names);

/// Canonical rendering; parse_term(format_term(t)) round-trips.
std::string format_term(const Term & t, std::span<const std::string> var_names,
    const Signature & sig);

/// Canonical variable names x0, x1, ... used wherever no user-supplied
/// names exist.
std::vector<std::string> default_var_names(int n);

std::string format_equation(const Equation & eq, const Signature & sig);

/// Canonical theory rendering; parse_theory(render_theory(T)) == T.
std::string render_theory(const Theory & t);

/// Reads a whole file; throws Error on failure.
std::string read_text_file(const std::string & path);

/// Theory-morphism file format:
///
///   morphism <Name>
///     source <path>
///     target <path>
///     map <symbol> (<vars>) -> <term>
///   end
///
/// Paths are resolved relative to base_dir.
TheoryMorphism parse_theory_morphism(std::string_view text, const std::string & base_dir);

} // namespace lawv

#endif
