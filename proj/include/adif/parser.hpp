#pragma once

#include "errors.hpp"
#include "formula.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace adif {

enum class ParseMode { Adif, Meta };

namespace detail {

struct Token {
    enum Type { Ident, Sym, End } type;
    std::string text;
    int line, col;
};

inline std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (std::isalnum(c) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_' || s[j] == '\'')) ++j;
            out.push_back({Token::Ident, s.substr(i, j - i), line, col});
            advance(j - i);
            continue;
        }
        if (std::string("()[]{},.~&|=+-").find((char)c) != std::string::npos) {
            out.push_back({Token::Sym, std::string(1, (char)c), line, col});
            advance(1);
            continue;
        }
        fail(ErrorCode::Syntax, "unexpected character '" + std::string(1, (char)c) + "' at line " +
                                    std::to_string(line) + ", column " + std::to_string(col));
    }
    out.push_back({Token::End, "", line, col});
    return out;
}

class Parser {
public:
    Parser(const std::string& text, ParseMode mode) : toks_(tokenize(text)), mode_(mode) {}

    Formula parse() {
        Formula f = parse_or();
        if (peek().type != Token::End) error("unexpected '" + peek().text + "'");
        return f;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    ParseMode mode_;
    std::vector<std::string> bound_;

    const Token& peek() const { return toks_[pos_]; }
    bool at_sym(const char* s) const { return peek().type == Token::Sym && peek().text == s; }

    [[noreturn]] void error(const std::string& msg, ErrorCode code = ErrorCode::Syntax) const {
        auto& t = peek();
        fail(code, msg + " at line " + std::to_string(t.line) + ", column " + std::to_string(t.col));
    }

    void expect(const char* s) {
        if (!at_sym(s)) error(std::string("expected '") + s + "'" + (peek().type == Token::End ? " before end of input" : ", found '" + peek().text + "'"));
        ++pos_;
    }

    std::string ident() {
        if (peek().type != Token::Ident) error("expected identifier");
        return toks_[pos_++].text;
    }

    static bool is_keyword(const std::string& s) {
        return s == "E" || s == "A" || s == "EE" || s == "AA" || s == "true" || s == "false";
    }

    std::string var_name() {
        if (peek().type == Token::Ident && is_keyword(peek().text)) error("reserved word '" + peek().text + "' used as a variable");
        return ident();
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (at_sym("|")) {
            ++pos_;
            f = disj(f, parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (at_sym("&")) {
            ++pos_;
            f = conj(f, parse_unary());
        }
        return f;
    }

    Formula parse_unary() {
        if (at_sym("~")) {
            ++pos_;
            return neg(parse_unary());
        }
        if (at_sym("(")) {
            ++pos_;
            Formula f = parse_or();
            expect(")");
            return f;
        }
        if (peek().type != Token::Ident) error(peek().type == Token::End ? "unexpected end of input" : "unexpected '" + peek().text + "'");
        const std::string& w = peek().text;
        if (w == "true") return ++pos_, mk_true();
        if (w == "false") return ++pos_, mk_false();
        if (w == "E" || w == "A" || w == "EE" || w == "AA") return parse_quant();
        std::string name = ident();
        if (at_sym("=")) {
            ++pos_;
            return eq(name, var_name());
        }
        expect("(");
        std::vector<std::string> args{var_name()};
        while (at_sym(",")) {
            ++pos_;
            args.push_back(var_name());
        }
        expect(")");
        return atom(name, args);
    }

    Formula parse_quant() {
        std::string q = ident();
        Kind k = q == "E" ? Kind::Exists : q == "A" ? Kind::Forall : q == "EE" ? Kind::MetaExists : Kind::MetaForall;
        if (is_meta_quantifier(k) && mode_ != ParseMode::Meta) {
            --pos_;
            error("meta quantifier '" + q + "' is only allowed in meta mode");
        }
        bool decorated = false;
        Constraint con;
        if (at_sym("[")) {
            ++pos_;
            decorated = true;
            if (at_sym("+")) con.minus = false;
            else if (at_sym("-")) con.minus = true;
            else error("expected '+' or '-'");
            ++pos_;
            expect("{");
            if (!at_sym("}")) {
                con.vars.insert(var_name());
                while (at_sym(",")) {
                    ++pos_;
                    con.vars.insert(var_name());
                }
            }
            expect("}");
            expect("]");
        }
        std::string x = var_name();
        for (auto& b : bound_)
            if (b == x) {
                --pos_;
                error("variable " + x + " is already bound by an enclosing quantifier", ErrorCode::PrefixViolation);
            }
        expect(".");
        bound_.push_back(x);
        Formula body = parse_or();
        bound_.pop_back();
        if (!decorated) con = default_constraint(x, body);
        return quant(k, con, x, body);
    }
};

} // namespace detail

inline Formula parse_formula(const std::string& text, ParseMode mode = ParseMode::Adif) {
    return detail::Parser(text, mode).parse();
}

} // namespace adif
