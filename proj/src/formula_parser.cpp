#include <cctype>
#include <optional>

#include "cmc/error.hpp"
#include "cmc/formula.hpp"

namespace cmc {

namespace {

struct Token {
    enum class Type { ident, symbol, end } type;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw FormulaError("formula syntax error at offset " + std::to_string(tok_.pos) + ": " + msg +
                           (tok_.type == Token::Type::end ? " (at end of input)" : " (near '" + tok_.text + "')"));
    }

private:
    void advance() {
        while (i_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
                ++i_;
            } else if (src_[i_] == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
        if (i_ >= src_.size()) {
            tok_ = {Token::Type::end, "", i_};
            return;
        }
        const std::size_t start = i_;
        const char c = src_[i_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) ++i_;
            tok_ = {Token::Type::ident, std::string(src_.substr(start, i_ - start)), start};
            return;
        }
        for (std::string_view sym : {"<=>", "=>", "<=", "!=", "&", "|", "~", "!", "(", ")", "{", "}", ".", ",", "=", "<"}) {
            if (src_.substr(i_, sym.size()) == sym) {
                i_ += sym.size();
                tok_ = {Token::Type::symbol, std::string(sym), start};
                return;
            }
        }
        tok_ = {Token::Type::symbol, std::string(1, c), start};
        fail("unexpected character");
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Token tok_{Token::Type::end, "", 0};
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    FormulaPtr parse() {
        auto phi = parse_iff();
        if (lex_.peek().type != Token::Type::end) lex_.fail("trailing input");
        return phi;
    }

private:
    bool accept(std::string_view sym) {
        if (lex_.peek().type == Token::Type::symbol && lex_.peek().text == sym) {
            lex_.take();
            return true;
        }
        return false;
    }

    void expect(std::string_view sym) {
        if (!accept(sym)) lex_.fail("expected '" + std::string(sym) + "'");
    }

    std::string ident() {
        if (lex_.peek().type != Token::Type::ident) lex_.fail("expected identifier");
        return lex_.take().text;
    }

    bool peek_keyword(std::string_view kw) const {
        return lex_.peek().type == Token::Type::ident && lex_.peek().text == kw;
    }

    FormulaPtr parse_iff() {
        auto lhs = parse_implies();
        while (accept("<=>")) lhs = f::iff(lhs, parse_implies());
        return lhs;
    }

    FormulaPtr parse_implies() {
        auto lhs = parse_or();
        if (accept("=>")) return f::implies(lhs, parse_implies());
        return lhs;
    }

    FormulaPtr parse_or() {
        auto lhs = parse_and();
        while (accept("|")) lhs = f::lor(lhs, parse_and());
        return lhs;
    }

    FormulaPtr parse_and() {
        auto lhs = parse_unary();
        while (accept("&")) lhs = f::land(lhs, parse_unary());
        return lhs;
    }

    FormulaPtr parse_unary() {
        if (accept("~") || accept("!")) return f::lnot(parse_unary());
        if (accept("(")) {
            auto phi = parse_iff();
            expect(")");
            return phi;
        }
        if (lex_.peek().type == Token::Type::ident) {
            const auto& kw = lex_.peek().text;
            if (kw == "forall1" || kw == "exists1" || kw == "forall2" || kw == "exists2") return parse_quantifier();
        }
        return parse_atom();
    }

    FormulaPtr parse_quantifier() {
        const auto kw = lex_.take().text;
        const bool all = kw.starts_with("forall");
        const bool second = kw.back() == '2';
        const auto var = ident();
        if (second ? !is_so_name(var) : !is_fo_name(var)) {
            throw FormulaError("variable '" + var + "' has the wrong case for " + kw);
        }
        std::optional<std::string> guard;
        if (!second && peek_keyword("in")) {
            lex_.take();
            guard = ident();
        }
        expect(".");
        auto body = parse_iff();
        if (guard) return all ? f::forall_in(var, *guard, body) : f::exists_in(var, *guard, body);
        return all ? f::forall(var, body) : f::exists(var, body);
    }

    std::pair<std::string, std::string> two_args() {
        expect("(");
        auto a = ident();
        expect(",");
        auto b = ident();
        expect(")");
        return {a, b};
    }

    static Attr attr_of(const std::string& s, const Lexer& lex) {
        if (s == "proc") return Attr::proc;
        if (s == "obj") return Attr::obj;
        if (s == "type") return Attr::type;
        if (s == "ival") return Attr::ival;
        if (s == "oval") return Attr::oval;
        if (s == "stime") return Attr::stime;
        if (s == "rtime") return Attr::rtime;
        lex.fail("unknown attribute '" + s + "'");
    }

    FormulaPtr parse_atom() {
        const auto head = ident();
        if (head == "true") return f::truth();
        if (head == "false") return f::falsity();
        if (head == "finite" && accept("{")) {
            auto var = ident();
            expect("|");
            auto body = parse_iff();
            expect("}");
            return f::finite(var, body);
        }
        if (lex_.peek().type == Token::Type::symbol && lex_.peek().text == "(") {
            if (head == "succ") {
                expect("(");
                auto a = ident();
                expect(",");
                auto b = ident();
                expect(",");
                auto p = ident();
                expect(")");
                return f::succ_rb(a, b, p);
            }
            auto [a, b] = two_args();
            if (head == "vis") return f::vis(a, b);
            if (head == "ar") return f::ar(a, b);
            if (head == "rb") return f::rb(a, b);
            if (head == "ss") return f::ss(a, b);
            if (head == "so") return f::so(a, b);
            if (head == "sorr") return f::sorr(a, b);
            if (head == "ctxt") return f::ctxt(a, b);
            if (head == "lastwrite") return f::last_write(a, b);
            throw FormulaError("unknown macro '" + head + "'");
        }
        if (peek_keyword("in")) {
            lex_.take();
            return f::in_set(head, ident());
        }
        expect(".");
        const Attr lhs = attr_of(ident(), lex_);
        std::string op;
        for (std::string_view s : {"=", "!=", "<", "<="}) {
            if (accept(s)) {
                op = s;
                break;
            }
        }
        if (op.empty()) lex_.fail("expected comparison operator");
        const auto rhs_head = ident();
        if (accept(".")) {
            const Attr rhs = attr_of(ident(), lex_);
            if (op == "<") return f::time_lt(head, lhs, rhs_head, rhs);
            if (op == "<=") return f::time_le(head, lhs, rhs_head, rhs);
            auto eq = f::attr_eq(head, lhs, rhs_head, rhs);
            return op == "=" ? eq : f::lnot(eq);
        }
        if (op == "<" || op == "<=") lex_.fail("time comparisons need two attributes");
        auto eq = literal_atom(head, lhs, rhs_head);
        return op == "=" ? eq : f::lnot(eq);
    }

    FormulaPtr literal_atom(const std::string& var, Attr attr, const std::string& lit) {
        switch (attr) {
            case Attr::proc: return f::proc_is(var, lit);
            case Attr::obj: return f::obj_is(var, lit);
            case Attr::type:
                if (lit == "read") return f::type_is(var, OpType::read);
                if (lit == "write") return f::type_is(var, OpType::write);
                lex_.fail("type literal must be read or write");
            case Attr::ival:
                if (lit == "_") return f::ival_empty(var);
                if (lit == "undef") lex_.fail("ival is never undef");
                return f::val_eq(var, attr, lit);
            case Attr::oval:
                if (lit == "_") return f::oval_empty(var);
                if (lit == "undef") return f::oval_undef(var);
                return f::val_eq(var, attr, lit);
            case Attr::stime:
            case Attr::rtime: lex_.fail("timestamps have no literals");
        }
        lex_.fail("bad literal");
    }

    Lexer lex_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace cmc
