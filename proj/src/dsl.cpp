#include "lawv/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lawv {

namespace {

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// One logical line, comment already stripped. Columns are 1-based.
struct Cursor {
    std::string_view text;
    int line_no = 1;
    int pos = 0;

    void skip_ws()
    {
        while (pos < static_cast<int>(text.size()) &&
            std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool at_end()
    {
        skip_ws();
        return pos >= static_cast<int>(text.size());
    }

    char peek()
    {
        skip_ws();
        return pos < static_cast<int>(text.size()) ? text[pos] : '\0';
    }

    SourceSpan here(int length = 1) const
    {
        return SourceSpan{line_no, pos + 1, length};
    }

    [[noreturn]] void fail(ParseErrorKind kind, const std::string & message, SourceSpan span)
    {
        throw ParseError(span, kind, message);
    }

    [[noreturn]] void fail(ParseErrorKind kind, const std::string & message)
    {
        skip_ws();
        fail(kind, message, here());
    }

    std::string ident(const char * what)
    {
        skip_ws();
        if (pos >= static_cast<int>(text.size()) || !ident_start(text[pos]))
            fail(ParseErrorKind::Syntax, std::string("expected ") + what);
        int start = pos;
        while (pos < static_cast<int>(text.size()) && ident_char(text[pos]))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }

    int integer(const char * what)
    {
        skip_ws();
        if (pos >= static_cast<int>(text.size()) || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail(ParseErrorKind::Syntax, std::string("expected ") + what);
        int start = pos;
        while (pos < static_cast<int>(text.size()) && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        return std::stoi(std::string(text.substr(start, pos - start)));
    }

    void expect(char c)
    {
        skip_ws();
        if (pos >= static_cast<int>(text.size()) || text[pos] != c)
            fail(ParseErrorKind::Syntax, std::string("expected '") + c + "'");
        ++pos;
    }

    void expect_end()
    {
        if (!at_end())
            fail(ParseErrorKind::Syntax, "unexpected trailing input");
    }

    std::string rest()
    {
        skip_ws();
        int start = pos;
        int stop = static_cast<int>(text.size());
        while (stop > start && std::isspace(static_cast<unsigned char>(text[stop - 1])))
            --stop;
        pos = stop;
        return std::string(text.substr(start, stop - start));
    }
};

Term parse_term_at(Cursor & c, const Theory & theory, const std::vector<std::string> & vars)
{
    c.skip_ws();
    SourceSpan span = c.here();
    std::string name = c.ident("a term");
    span.length = static_cast<int>(name.size());
    if (c.peek() == '(') {
        c.expect('(');
        std::vector<Term> args;
        if (c.peek() != ')') {
            args.push_back(parse_term_at(c, theory, vars));
            while (c.peek() == ',') {
                c.expect(',');
                args.push_back(parse_term_at(c, theory, vars));
            }
        }
        c.expect(')');
        int sym = theory.symbol_index(name);
        if (sym < 0)
            c.fail(ParseErrorKind::UnknownSymbol, "unknown operation '" + name + "'", span);
        int arity = theory.signature[sym].arity;
        if (static_cast<int>(args.size()) != arity)
            c.fail(ParseErrorKind::ArityMismatch, "operation '" + name + "' expects " +
                std::to_string(arity) + " argument(s), got " + std::to_string(args.size()), span);
        return Term::app(sym, std::move(args));
    }
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) {
        std::string message = "unbound variable '" + name + "'";
        if (theory.symbol_index(name) >= 0)
            message += " (write '" + name + "(...)' to apply the operation)";
        c.fail(ParseErrorKind::UnboundVariable, message, span);
    }
    return Term::var(static_cast<int>(it - vars.begin()));
}

std::vector<std::string> parse_var_list(Cursor & c)
{
    std::vector<std::string> vars;
    c.expect('(');
    while (c.peek() != ')') {
        c.skip_ws();
        SourceSpan span = c.here();
        std::string v = c.ident("a variable name");
        span.length = static_cast<int>(v.size());
        if (std::find(vars.begin(), vars.end(), v) != vars.end())
            c.fail(ParseErrorKind::DuplicateName, "duplicate variable '" + v + "'", span);
        vars.push_back(std::move(v));
    }
    c.expect(')');
    return vars;
}

Equation parse_eq_line(Cursor & c, const Theory & theory)
{
    std::string name = c.ident("an equation name");
    std::vector<std::string> vars = parse_var_list(c);
    c.expect(':');
    Term lhs = parse_term_at(c, theory, vars);
    c.expect('=');
    Term rhs = parse_term_at(c, theory, vars);
    c.expect_end();
    return Equation{std::move(name), static_cast<int>(vars.size()), std::move(lhs), std::move(rhs)};
}

// Splits into logical lines with comments stripped, keeping line numbers.
std::vector<Cursor> logical_lines(std::string_view text)
{
    std::vector<Cursor> lines;
    int line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t stop = text.find('\n', start);
        std::string_view line = text.substr(start,
            stop == std::string_view::npos ? std::string_view::npos : stop - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        Cursor c{line, line_no, 0};
        if (!c.at_end()) {
            c.pos = 0;
            lines.push_back(c);
        }
        if (stop == std::string_view::npos)
            break;
        start = stop + 1;
        ++line_no;
    }
    return lines;
}

} // namespace

std::string_view to_string(ParseErrorKind kind)
{
    switch (kind) {
    case ParseErrorKind::UnknownSymbol: return "unknown-symbol";
    case ParseErrorKind::ArityMismatch: return "arity-mismatch";
    case ParseErrorKind::UnboundVariable: return "unbound-variable";
    case ParseErrorKind::DuplicateName: return "duplicate-name";
    case ParseErrorKind::Syntax: return "syntax";
    }
    return "syntax";
}

ParseError::ParseError(SourceSpan error_span, ParseErrorKind error_kind, const std::string & message) :
    Error(std::to_string(error_span.line) + ":" + std::to_string(error_span.column) + ": " +
        std::string(to_string(error_kind)) + ": " + message),
    span(error_span),
    kind(error_kind)
{
}

Theory parse_theory(std::string_view text)
{
    Theory theory;
    bool saw_header = false, saw_end = false;
    for (Cursor & c : logical_lines(text)) {
        if (saw_end)
            c.fail(ParseErrorKind::Syntax, "input after 'end'");
        c.skip_ws();
        SourceSpan kw_span = c.here();
        std::string kw = c.ident("'theory', 'op', 'eq' or 'end'");
        kw_span.length = static_cast<int>(kw.size());
        if (!saw_header) {
            if (kw != "theory")
                c.fail(ParseErrorKind::Syntax, "expected 'theory <Name>' header", kw_span);
            theory.name = c.ident("a theory name");
            c.expect_end();
            saw_header = true;
        }
        else if (kw == "op") {
            SourceSpan span = c.here();
            std::string name = c.ident("an operation name");
            span.length = static_cast<int>(name.size());
            if (theory.symbol_index(name) >= 0)
                c.fail(ParseErrorKind::DuplicateName, "duplicate operation '" + name + "'", span);
            c.expect(':');
            int arity = c.integer("an arity");
            c.expect_end();
            theory.signature.push_back(OperationSymbol{std::move(name), arity});
        }
        else if (kw == "eq") {
            theory.equations.push_back(parse_eq_line(c, theory));
        }
        else if (kw == "end") {
            c.expect_end();
            saw_end = true;
        }
        else {
            c.fail(ParseErrorKind::Syntax, "expected 'op', 'eq' or 'end', got '" + kw + "'", kw_span);
        }
    }
    if (!saw_header)
        throw ParseError(SourceSpan{1, 1, 0}, ParseErrorKind::Syntax, "missing 'theory <Name>' header");
    if (!saw_end)
        throw ParseError(SourceSpan{1, 1, 0}, ParseErrorKind::Syntax, "missing 'end'");
    theory.validate();
    return theory;
}

std::vector<Equation> parse_candidates(std::string_view text, const Theory & theory)
{
    std::vector<Equation> out;
    for (Cursor & c : logical_lines(text)) {
        c.skip_ws();
        SourceSpan kw_span = c.here();
        std::string kw = c.ident("'eq'");
        if (kw != "eq")
            c.fail(ParseErrorKind::Syntax, "expected 'eq', got '" + kw + "'", kw_span);
        out.push_back(parse_eq_line(c, theory));
    }
    return out;
}

Term parse_term(std::string_view text, const Theory & theory, const std::vector<std::string> & var_names)
{
    Cursor c{text, 1, 0};
    Term t = parse_term_at(c, theory, var_names);
    c.expect_end();
    return t;
}

std::string format_term(const Term & t, std::span<const std::string> var_names, const Signature & sig)
{
    if (t.is_var()) {
        if (t.var_index() >= static_cast<int>(var_names.size()))
            throw MalformedTermError("format_term: variable index out of range");
        return var_names[t.var_index()];
    }
    if (t.symbol() >= static_cast<int>(sig.size()))
        throw MalformedTermError("format_term: symbol index out of range");
    std::string out = sig[t.symbol()].name;
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i > 0)
            out += ',';
        out += format_term(t.args()[i], var_names, sig);
    }
    out += ')';
    return out;
}

std::vector<std::string> default_var_names(int n)
{
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0; i < n; ++i)
        names.push_back("x" + std::to_string(i));
    return names;
}

std::string format_equation(const Equation & eq, const Signature & sig)
{
    auto names = default_var_names(eq.var_count);
    std::string out = "eq " + (eq.name.empty() ? std::string("unnamed") : eq.name) + " (";
    for (int i = 0; i < eq.var_count; ++i) {
        if (i > 0)
            out += ' ';
        out += names[i];
    }
    out += ") : " + format_term(eq.lhs, names, sig) + " = " + format_term(eq.rhs, names, sig);
    return out;
}

std::string render_theory(const Theory & t)
{
    std::string out = "theory " + t.name + "\n";
    for (const auto & sym : t.signature)
        out += "  op " + sym.name + " : " + std::to_string(sym.arity) + "\n";
    for (const auto & eq : t.equations)
        out += "  " + format_equation(eq, t.signature) + "\n";
    out += "end\n";
    return out;
}

std::string read_text_file(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TheoryMorphism parse_theory_morphism(std::string_view text, const std::string & base_dir)
{
    TheoryMorphism morphism;
    std::shared_ptr<Theory> source, target;
    std::vector<bool> mapped;
    bool saw_header = false, saw_end = false;

    auto resolve = [&](const std::string & path) {
        if (!path.empty() && path.front() == '/')
            return path;
        return base_dir.empty() ? path : base_dir + "/" + path;
    };

    for (Cursor & c : logical_lines(text)) {
        if (saw_end)
            c.fail(ParseErrorKind::Syntax, "input after 'end'");
        c.skip_ws();
        SourceSpan kw_span = c.here();
        std::string kw = c.ident("'morphism', 'source', 'target', 'map' or 'end'");
        kw_span.length = static_cast<int>(kw.size());
        if (!saw_header) {
            if (kw != "morphism")
                c.fail(ParseErrorKind::Syntax, "expected 'morphism <Name>' header", kw_span);
            morphism.name = c.ident("a morphism name");
            c.expect_end();
            saw_header = true;
        }
        else if (kw == "source" || kw == "target") {
            std::string path = c.rest();
            if (path.empty())
                c.fail(ParseErrorKind::Syntax, "expected a theory file path");
            auto theory = std::make_shared<Theory>(parse_theory(read_text_file(resolve(path))));
            (kw == "source" ? source : target) = std::move(theory);
        }
        else if (kw == "map") {
            if (!source || !target)
                c.fail(ParseErrorKind::Syntax, "'map' before 'source'/'target'", kw_span);
            if (mapped.empty())
                mapped.assign(source->signature.size(), false);
            c.skip_ws();
            SourceSpan span = c.here();
            std::string name = c.ident("a source operation name");
            span.length = static_cast<int>(name.size());
            int sym = source->symbol_index(name);
            if (sym < 0)
                c.fail(ParseErrorKind::UnknownSymbol, "unknown source operation '" + name + "'", span);
            if (mapped[sym])
                c.fail(ParseErrorKind::DuplicateName, "operation '" + name + "' mapped twice", span);
            std::vector<std::string> vars = parse_var_list(c);
            if (static_cast<int>(vars.size()) != source->signature[sym].arity)
                c.fail(ParseErrorKind::ArityMismatch, "operation '" + name + "' has arity " +
                    std::to_string(source->signature[sym].arity) + ", got " +
                    std::to_string(vars.size()) + " variable(s)", span);
            c.expect('-');
            c.expect('>');
            Term image = parse_term_at(c, *target, vars);
            c.expect_end();
            if (morphism.assignment.size() < source->signature.size())
                morphism.assignment.resize(source->signature.size());
            morphism.assignment[sym] = std::move(image);
            mapped[sym] = true;
        }
        else if (kw == "end") {
            c.expect_end();
            saw_end = true;
        }
        else {
            c.fail(ParseErrorKind::Syntax, "expected 'source', 'target', 'map' or 'end', got '" + kw + "'", kw_span);
        }
    }
    if (!saw_header)
        throw ParseError(SourceSpan{1, 1, 0}, ParseErrorKind::Syntax, "missing 'morphism <Name>' header");
    if (!saw_end)
        throw ParseError(SourceSpan{1, 1, 0}, ParseErrorKind::Syntax, "missing 'end'");
    if (!source || !target)
        throw ParseError(SourceSpan{1, 1, 0}, ParseErrorKind::Syntax, "morphism needs 'source' and 'target'");
    for (std::size_t s = 0; s < source->signature.size(); ++s)
        if (mapped.empty() || !mapped[s])
            throw IncompleteMorphismError("morphism '" + morphism.name + "': no map for '" +
                source->signature[s].name + "'");
    morphism.source = std::move(source);
    morphism.target = std::move(target);
    morphism.validate();
    return morphism;
}

} // namespace lawv
