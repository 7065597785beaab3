#include "qpp/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "qpp/errors.hpp"

namespace qpp {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected, std::string found)
    : std::runtime_error(fmt::format("{}:{}: expected {}; found {}", line, column, join_expected(expected), found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { Ident, Int, Real, Symbol, End };

struct Token {
    Tok kind;
    std::string text;
    bool primed = false;  // identifiers only
    int line;
    int column;
};

const std::set<std::string, std::less<>>& reserved() {
    static const std::set<std::string, std::less<>> words = {
        "var",  "bool", "qreg",  "oracle", "def",  "main", "spec", "dist", "ok",   "tick", "call",
        "measure", "with", "if", "then",   "else", "prob", "zero", "apply", "true", "false", "inf",
        "rand", "not",  "div",   "mod"};
    return words;
}

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return fmt::format("'{}{}'", t.text, t.primed ? "'" : "");
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            const int line = line_;
            const int column = column_;
            if (pos_ >= text_.size()) {
                out.push_back(Token{Tok::End, "", false, line, column});
                return out;
            }
            const char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string word;
                while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                    word += take();
                }
                bool primed = false;
                if (pos_ < text_.size() && text_[pos_] == '\'') {
                    take();
                    primed = true;
                }
                out.push_back(Token{Tok::Ident, std::move(word), primed, line, column});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(number(line, column));
            } else {
                out.push_back(Token{Tok::Symbol, symbol(line, column), false, line, column});
            }
        }
    }

private:
    char take() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    bool at(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void skip_space() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                take();
            } else if (at("--")) {
                while (pos_ < text_.size() && text_[pos_] != '\n') take();
            } else {
                return;
            }
        }
    }

    bool digit_at(std::size_t i) const { return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i])); }

    Token number(int line, int column) {
        std::string s;
        bool real = false;
        while (digit_at(pos_)) s += take();
        if (pos_ < text_.size() && text_[pos_] == '.' && digit_at(pos_ + 1)) {
            real = true;
            s += take();
            while (digit_at(pos_)) s += take();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
            if (digit_at(k)) {
                real = true;
                while (pos_ < k) s += take();
                while (digit_at(pos_)) s += take();
            }
        }
        return Token{real ? Tok::Real : Tok::Int, std::move(s), false, line, column};
    }

    std::string symbol(int line, int column) {
        static constexpr std::string_view kLong[] = {":=", ",..", "/\\", "\\/", "=>", "<=", ">="};
        for (const auto s : kLong) {
            if (at(s)) {
                for (std::size_t i = 0; i < s.size(); ++i) take();
                return std::string(s);
            }
        }
        static constexpr std::string_view kShort = ";(){}[],:=#<>+-*/^";
        const char c = text_[pos_];
        if (kShort.find(c) == std::string_view::npos) {
            throw ParseError(line, column, {"a token"}, fmt::format("character '{}'", c));
        }
        take();
        return std::string(1, c);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

constexpr int kMaxNesting = 200;

struct RegisterUse {
    std::string name;
    int line;
    int column;
};

const std::vector<std::string> kUnitStart = {"'ok'",   "'tick'", "'call'", "'measure'", "'if'",
                                             "'('",    "'{'",    "'dist'", "identifier"};
const std::vector<std::string> kOperand = {"integer", "real", "identifier", "'true'", "'false'",
                                           "'inf'",   "'rand'", "'not'",    "'-'",    "'('"};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

    Program program() {
        Program p;
        bool has_main = false;
        std::set<std::string> names;
        auto declare = [&](const Token& at, const std::string& name) {
            if (!names.insert(name).second) {
                throw ValidationError(
                    fmt::format("{}:{}: duplicate declaration of '{}'", at.line, at.column, name));
            }
        };
        while (!at_end()) {
            const Token& head = peek();
            if (keyword("var")) {
                const Token& at = peek();
                const std::string name = ident("variable name");
                declare(at, name);
                symbol(":");
                if (keyword("bool")) {
                    p.vars.push_back(VarDecl{name, VarDecl::Type::Bool, 0, 2});
                } else {
                    const auto lo = signed_int();
                    symbol(",..");
                    const auto hi = signed_int();
                    p.vars.push_back(VarDecl{name, VarDecl::Type::Int, lo, hi});
                }
            } else if (keyword("qreg")) {
                const Token& at = peek();
                const std::string name = ident("register name");
                if (p.qreg) {
                    throw ValidationError(fmt::format("{}:{}: only one quantum register per program is supported",
                                                      at.line, at.column));
                }
                declare(at, name);
                symbol("[");
                const auto n = signed_int();
                symbol("]");
                if (n < 0 || n > std::numeric_limits<int>::max()) {
                    throw ValidationError(fmt::format("{}:{}: bad register size {}", at.line, at.column, n));
                }
                p.qreg = QRegDecl{name, static_cast<int>(n)};
            } else if (keyword("oracle")) {
                const Token& at = peek();
                const std::string name = ident("oracle name");
                declare(at, name);
                symbol("=");
                const Token& bits = peek();
                if (bits.kind != Tok::Int || bits.text.find_first_not_of("01") != std::string::npos) {
                    fail({"bit string"});
                }
                std::vector<std::uint8_t> table;
                for (const char c : bits.text) table.push_back(static_cast<std::uint8_t>(c - '0'));
                advance();
                p.oracles.push_back(OracleDecl{name, std::move(table)});
            } else if (keyword("def")) {
                const Token& at = peek();
                const std::string name = ident("definition name");
                declare(at, name);
                symbol("=");
                p.definitions.push_back(Definition{name, seq()});
            } else if (keyword("main")) {
                if (has_main) throw ValidationError(fmt::format("{}:{}: duplicate main", head.line, head.column));
                has_main = true;
                p.main = seq();
            } else if (keyword("spec")) {
                if (p.spec) throw ValidationError(fmt::format("{}:{}: duplicate spec", head.line, head.column));
                const SpecKind kind = keyword("dist") ? SpecKind::Dist : SpecKind::Bool;
                symbol("{");
                Expr body = expr();
                symbol("}");
                p.spec = Spec{kind, std::move(body)};
            } else {
                fail({"'var'", "'qreg'", "'oracle'", "'def'", "'main'", "'spec'"});
            }
        }
        for (const auto& use : registers_) {
            if (!p.qreg) {
                throw ValidationError(
                    fmt::format("{}:{}: '{}' is not a declared quantum register", use.line, use.column, use.name));
            }
            if (use.name != p.qreg->name) {
                throw ValidationError(fmt::format("{}:{}: '{}' is not the quantum register '{}'", use.line,
                                                  use.column, use.name, p.qreg->name));
            }
        }
        validate(p);
        return p;
    }

    Stmt whole_stmt() {
        Stmt s = seq();
        if (!at_end()) fail({"';'", "end of input"});
        return s;
    }

    Expr whole_expr() {
        Expr e = expr();
        if (!at_end()) fail({"operator", "end of input"});
        return e;
    }

private:
    // -- tokens ------------------------------------------------------------

    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Tok::End; }
    void advance() {
        if (!at_end()) ++pos_;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        throw ParseError(t.line, t.column, std::move(expected), describe(t));
    }

    bool is_symbol(std::string_view s) const { return peek().kind == Tok::Symbol && peek().text == s; }
    bool is_keyword(std::string_view k) const {
        return peek().kind == Tok::Ident && !peek().primed && peek().text == k;
    }
    bool keyword(std::string_view k) {
        if (!is_keyword(k)) return false;
        advance();
        return true;
    }
    void expect_keyword(std::string_view k) {
        if (!keyword(k)) fail({fmt::format("'{}'", k)});
    }
    void symbol(std::string_view s) {
        if (!is_symbol(s)) fail({fmt::format("'{}'", s)});
        advance();
    }
    bool accept(std::string_view s) {
        if (!is_symbol(s)) return false;
        advance();
        return true;
    }

    std::string ident(const char* what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || t.primed || reserved().contains(t.text)) fail({what});
        advance();
        return t.text;
    }

    std::int64_t signed_int() {
        const bool negative = accept("-");
        if (peek().kind != Tok::Int) fail({"integer"});
        const auto v = int_value(peek(), negative);
        advance();
        return v;
    }

    std::int64_t int_value(const Token& t, bool negative) const {
        std::uint64_t u = 0;
        const auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), u);
        const std::uint64_t limit = negative ? std::uint64_t{1} << 63 : (std::uint64_t{1} << 63) - 1;
        if (ec != std::errc{} || end != t.text.data() + t.text.size() || u > limit) {
            throw ParseError(t.line, t.column, {"integer within 64 bits"}, describe(t));
        }
        if (negative) return u == (std::uint64_t{1} << 63) ? std::numeric_limits<std::int64_t>::min()
                                                           : -static_cast<std::int64_t>(u);
        return static_cast<std::int64_t>(u);
    }

    double real_value(const Token& t) const {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || end != t.text.data() + t.text.size()) {
            throw ParseError(t.line, t.column, {"finite real"}, describe(t));
        }
        return v;
    }

    struct Nest {
        explicit Nest(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxNesting) {
                const Token& t = p_.peek();
                throw ParseError(t.line, t.column, {fmt::format("nesting of at most {} levels", kMaxNesting)},
                                 describe(t));
            }
        }
        ~Nest() { --p_.depth_; }
        Parser& p_;
    };

    // -- statements --------------------------------------------------------

    Stmt seq() {
        std::vector<Stmt> parts;
        parts.push_back(unit());
        while (accept(";")) parts.push_back(unit());
        return st::seq(std::move(parts));
    }

    void use_register() {
        const Token& t = peek();
        const std::string name = ident("quantum register");
        registers_.push_back(RegisterUse{name, t.line, t.column});
    }

    Stmt unit() {
        Nest guard(*this);
        if (keyword("ok")) return st::ok();
        if (keyword("tick")) return st::tick();
        if (keyword("call")) return st::call(ident("definition name"));
        if (keyword("measure")) {
            use_register();
            std::string result = ident("result variable");
            std::string with;
            if (keyword("with")) with = ident("measurement name");
            return st::measure(std::move(result), std::move(with));
        }
        if (keyword("if")) {
            if (keyword("prob")) {
                symbol("(");
                Expr p = expr();
                symbol(")");
                expect_keyword("then");
                Stmt a = unit();
                expect_keyword("else");
                Stmt b = unit();
                return st::prob_if(std::move(p), std::move(a), std::move(b));
            }
            Expr c = expr();
            expect_keyword("then");
            Stmt a = unit();
            expect_keyword("else");
            Stmt b = unit();
            return st::if_(std::move(c), std::move(a), std::move(b));
        }
        if (accept("(")) {
            Stmt s = seq();
            symbol(")");
            return s;
        }
        if (accept("{")) {
            Expr e = expr();
            symbol("}");
            return st::spec(SpecKind::Bool, std::move(e));
        }
        if (keyword("dist")) {
            symbol("{");
            Expr e = expr();
            symbol("}");
            return st::spec(SpecKind::Dist, std::move(e));
        }
        const Token& target = peek();
        if (target.kind != Tok::Ident || target.primed || reserved().contains(target.text)) fail(kUnitStart);
        advance();
        symbol(":=");
        if (keyword("zero")) {
            registers_.push_back(RegisterUse{target.text, target.line, target.column});
            symbol("(");
            const auto n = signed_int();
            symbol(")");
            if (n < 0 || n > std::numeric_limits<int>::max()) {
                throw ValidationError(fmt::format("{}:{}: bad register size {}", target.line, target.column, n));
            }
            return st::qinit(static_cast<int>(n));
        }
        if (keyword("apply")) {
            registers_.push_back(RegisterUse{target.text, target.line, target.column});
            symbol("(");
            Stmt s = st::ok();
            if (keyword("oracle")) {
                s = st::apply_oracle(ident("oracle name"));
            } else {
                const std::string name = ident("operator");
                if (name == "H") {
                    s = st::apply_h();
                } else if (name == "invmean") {
                    s = st::apply_invmean();
                } else {
                    s = st::apply_named(name);
                }
            }
            symbol(",");
            use_register();
            symbol(")");
            return s;
        }
        return st::assign(target.text, expr());
    }

    // -- expressions -------------------------------------------------------

    Expr expr() {
        Nest guard(*this);
        Expr lhs = disjunction();
        if (accept("=>")) return ex::bin(BinaryOp::Implies, std::move(lhs), expr());
        return lhs;
    }

    Expr disjunction() {
        Expr e = conjunction();
        while (accept("\\/")) e = ex::bin(BinaryOp::Or, std::move(e), conjunction());
        return e;
    }

    Expr conjunction() {
        Expr e = negation();
        while (accept("/\\")) e = ex::bin(BinaryOp::And, std::move(e), negation());
        return e;
    }

    Expr negation() {
        if (keyword("not")) {
            Nest guard(*this);
            return ex::lnot(negation());
        }
        return comparison();
    }

    Expr comparison() {
        Expr lhs = additive();
        static const std::pair<std::string_view, BinaryOp> kOps[] = {
            {"=", BinaryOp::Eq}, {"#", BinaryOp::Ne}, {"<", BinaryOp::Lt},
            {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}};
        for (const auto& [sym, op] : kOps) {
            if (accept(sym)) return ex::bin(op, std::move(lhs), additive());
        }
        return lhs;
    }

    Expr additive() {
        Expr e = multiplicative();
        while (true) {
            if (accept("+")) {
                e = ex::bin(BinaryOp::Add, std::move(e), multiplicative());
            } else if (accept("-")) {
                e = ex::bin(BinaryOp::Sub, std::move(e), multiplicative());
            } else {
                return e;
            }
        }
    }

    Expr multiplicative() {
        Expr e = unary();
        while (true) {
            if (accept("*")) {
                e = ex::bin(BinaryOp::Mul, std::move(e), unary());
            } else if (accept("/")) {
                e = ex::bin(BinaryOp::Div, std::move(e), unary());
            } else if (keyword("div")) {
                e = ex::bin(BinaryOp::IntDiv, std::move(e), unary());
            } else if (keyword("mod")) {
                e = ex::bin(BinaryOp::Mod, std::move(e), unary());
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept("-")) {
            Nest guard(*this);
            const Token& t = peek();
            // A minus directly before a number is part of the literal.
            if (t.kind == Tok::Int && !is_power_next()) {
                const auto v = int_value(t, true);
                advance();
                return ex::lit(v);
            }
            if (t.kind == Tok::Real && !is_power_next()) {
                const double v = real_value(t);
                advance();
                return ex::real(-v);
            }
            return ex::neg(unary());
        }
        return power();
    }

    bool is_power_next() const {
        const Token& next = toks_[std::min(pos_ + 1, toks_.size() - 1)];
        return next.kind == Tok::Symbol && next.text == "^";
    }

    Expr power() {
        Expr base = primary();
        if (accept("^")) {
            Nest guard(*this);
            return ex::bin(BinaryOp::Pow, std::move(base), unary());
        }
        return base;
    }

    Expr primary() {
        const Token& t = peek();
        if (t.kind == Tok::Int) {
            const auto v = int_value(t, false);
            advance();
            return ex::lit(v);
        }
        if (t.kind == Tok::Real) {
            const double v = real_value(t);
            advance();
            return ex::real(v);
        }
        if (accept("(")) {
            Expr e = expr();
            symbol(")");
            return e;
        }
        if (keyword("true")) return ex::boolean(true);
        if (keyword("false")) return ex::boolean(false);
        if (keyword("inf")) return ex::inf();
        if (keyword("rand")) {
            symbol("(");
            Expr bound = expr();
            symbol(")");
            return ex::rand(std::move(bound));
        }
        if (t.kind != Tok::Ident || reserved().contains(t.text)) fail(kOperand);
        const Token name = t;
        advance();
        if (!name.primed && accept("(")) {
            if (!is_known_function(name.text)) {
                throw ParseError(name.line, name.column, {"known function name"}, describe(name));
            }
            std::vector<Expr> args;
            if (!accept(")")) {
                args.push_back(expr());
                while (accept(",")) args.push_back(expr());
                symbol(")");
            }
            return ex::call(name.text, std::move(args));
        }
        return name.primed ? ex::primed(name.text) : ex::var(name.text);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    std::vector<RegisterUse> registers_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }
Stmt parse_stmt(std::string_view text) { return Parser(text).whole_stmt(); }
Expr parse_expr(std::string_view text) { return Parser(text).whole_expr(); }

}  // namespace qpp
