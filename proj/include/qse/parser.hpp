#pragma once

// Recursive-descent parser for the condition-language DSL:
//
//   program := decl* tree ;            decl := "var" IDENT ":" INT ";"
//   tree    := "{" IDENT "}" | "{" tree "}"
//            | "if" "(" cond ")" tree "else" tree
//   cond    := or ; or := and ("||" and)* ; and := not ("&&" not)*
//   not     := "!" not | "(" cond ")" | rel
//   rel     := arith ("<"|"<="|">"|">="|"=="|"!=") arith
//   arith   := term ("+" term)* ; term := atom ("*" atom)*
//   atom    := IDENT | INT | "(" arith ")"
//
// "//" starts a line comment. Parsing validates declarations (unique names,
// width >= 1), that every referenced variable is declared, and that branch
// labels are unique.

#include <cctype>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "qse/ast.hpp"

namespace qse {

struct ParseError : Error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : Error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l),
          column(c)
    {
    }
};

namespace detail {

enum class TokKind { Ident, Int, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    std::uint64_t value = 0;
    int line = 1;
    int col = 1;
};

inline std::vector<Token> tokenize(const std::string& src)
{
    std::vector<Token> out;
    std::size_t pos = 0;
    int line = 1, col = 1;
    auto eat = [&]() {
        char c = src[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    };
    while (true) {
        while (pos < src.size()) {
            if (src[pos] == '/' && pos + 1 < src.size() && src[pos + 1] == '/') {
                while (pos < src.size() && src[pos] != '\n') eat();
            } else if (std::isspace(static_cast<unsigned char>(src[pos]))) {
                eat();
            } else {
                break;
            }
        }
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) {
            t.kind = TokKind::End;
            t.text = "<end of input>";
            out.push_back(t);
            return out;
        }
        char c = src[pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = TokKind::Ident;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                t.text.push_back(eat());
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = TokKind::Int;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                t.text.push_back(eat());
            try {
                t.value = std::stoull(t.text);
            } catch (const std::exception&) {
                throw ParseError(t.line, t.col, "integer literal out of range");
            }
        } else {
            t.kind = TokKind::Punct;
            t.text.push_back(eat());
            if (pos < src.size()) {
                char d = src[pos];
                if ((c == '<' && d == '=') || (c == '>' && d == '=') || (c == '=' && d == '=') ||
                    (c == '!' && d == '=') || (c == '&' && d == '&') || (c == '|' && d == '|'))
                    t.text.push_back(eat());
            }
            if (t.text == "=" || t.text == "&" || t.text == "|")
                throw ParseError(t.line, t.col, "unexpected character '" + t.text + "'");
        }
        out.push_back(std::move(t));
    }
}

inline bool is_rel_punct(const std::string& s)
{
    return s == "<" || s == "<=" || s == ">" || s == ">=" || s == "==" || s == "!=";
}

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

    BranchTree parse()
    {
        BranchTree tree;
        while (peek().kind == TokKind::Ident && peek().text == "var")
            tree.decls.push_back(parse_decl());
        tree.root = parse_tree();
        if (peek().kind != TokKind::End) fail("trailing input after branch tree");
        check_vars(tree.root, tree.decls);
        return tree;
    }

private:
    VarDecl parse_decl()
    {
        expect_ident("var");
        Token name = take();
        if (name.kind != TokKind::Ident || is_keyword(name.text))
            throw ParseError(name.line, name.col, "expected variable name");
        expect_punct(":");
        Token w = take();
        if (w.kind != TokKind::Int) throw ParseError(w.line, w.col, "expected bit width");
        if (w.value == 0) throw ParseError(w.line, w.col, "variable width must be at least 1");
        expect_punct(";");
        for (const auto& d : decls_)
            if (d.name == name.text)
                throw ParseError(name.line, name.col,
                                 "duplicate declaration of '" + name.text + "'");
        VarDecl d{name.text, static_cast<std::uint32_t>(w.value)};
        decls_.push_back(d);
        return d;
    }

    static bool is_keyword(const std::string& s)
    {
        return s == "if" || s == "else" || s == "var";
    }

    NodePtr parse_tree()
    {
        if (peek_punct("{")) {
            take();
            // Braces either delimit a leaf label or group a nested subtree.
            if (peek_punct("{") || (peek().kind == TokKind::Ident && peek().text == "if")) {
                NodePtr inner = parse_tree();
                expect_punct("}");
                return inner;
            }
            Token id = take();
            if (id.kind != TokKind::Ident || is_keyword(id.text))
                throw ParseError(id.line, id.col, "expected branch label");
            expect_punct("}");
            if (!branch_ids_.insert(id.text).second)
                throw ParseError(id.line, id.col, "duplicate branch label '" + id.text + "'");
            return BranchNode::leaf(id.text);
        }
        if (peek().kind == TokKind::Ident && peek().text == "if") {
            take();
            expect_punct("(");
            CondPtr cond = parse_cond();
            expect_punct(")");
            NodePtr then_b = parse_tree();
            expect_ident("else");
            NodePtr else_b = parse_tree();
            return BranchNode::branch(cond, then_b, else_b);
        }
        fail("expected '{' or 'if'");
        return nullptr;
    }

    CondPtr parse_cond() { return parse_or(); }

    CondPtr parse_or()
    {
        CondPtr c = parse_and();
        while (peek_punct("||")) {
            take();
            c = CondExpr::disj(c, parse_and());
        }
        return c;
    }

    CondPtr parse_and()
    {
        CondPtr c = parse_not();
        while (peek_punct("&&")) {
            take();
            c = CondExpr::conj(c, parse_not());
        }
        return c;
    }

    CondPtr parse_not()
    {
        if (peek_punct("!")) {
            take();
            return CondExpr::negation(parse_not());
        }
        // A '(' opens either a boolean group or a parenthesized arithmetic
        // atom, e.g. "(a<b) && c" versus "(a+b)<4". Arithmetic can never
        // contain a relational or boolean operator at any depth, so one scan
        // of the balanced group decides.
        if (peek_punct("(") && group_is_boolean()) {
            take();
            CondPtr c = parse_cond();
            expect_punct(")");
            return c;
        }
        return parse_rel();
    }

    bool group_is_boolean() const
    {
        int depth = 0;
        for (std::size_t i = pos_; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.kind == TokKind::End) break;
            if (t.kind != TokKind::Punct) continue;
            if (t.text == "(") {
                ++depth;
            } else if (t.text == ")") {
                if (--depth == 0) break;
            } else if (is_rel_punct(t.text) || t.text == "&&" || t.text == "||" || t.text == "!") {
                return true;
            }
        }
        return false;
    }

    CondPtr parse_rel()
    {
        ArithPtr a = parse_arith();
        Token t = take();
        if (t.kind != TokKind::Punct || !is_rel_punct(t.text))
            throw ParseError(t.line, t.col, "expected relational operator, got '" + t.text + "'");
        RelOp op = t.text == "<"    ? RelOp::Lt
                   : t.text == "<=" ? RelOp::Le
                   : t.text == ">"  ? RelOp::Gt
                   : t.text == ">=" ? RelOp::Ge
                   : t.text == "==" ? RelOp::Eq
                                    : RelOp::Ne;
        ArithPtr b = parse_arith();
        return CondExpr::rel(a, op, b);
    }

    ArithPtr parse_arith()
    {
        ArithPtr a = parse_term();
        while (peek_punct("+")) {
            take();
            a = ArithExpr::add(a, parse_term());
        }
        return a;
    }

    ArithPtr parse_term()
    {
        ArithPtr a = parse_atom();
        while (peek_punct("*")) {
            take();
            a = ArithExpr::mul(a, parse_atom());
        }
        return a;
    }

    ArithPtr parse_atom()
    {
        Token t = take();
        if (t.kind == TokKind::Ident) {
            used_vars_.push_back(t);
            return ArithExpr::variable(t.text);
        }
        if (t.kind == TokKind::Int) return ArithExpr::constant(t.value);
        if (t.kind == TokKind::Punct && t.text == "(") {
            ArithPtr a = parse_arith();
            expect_punct(")");
            return a;
        }
        throw ParseError(t.line, t.col, "expected variable, integer or '('");
    }

    void check_vars(const NodePtr&, const std::vector<VarDecl>& decls)
    {
        for (const Token& use : used_vars_) {
            bool found = false;
            for (const auto& d : decls)
                if (d.name == use.text) {
                    found = true;
                    break;
                }
            if (!found)
                throw ParseError(use.line, use.col, "undeclared variable '" + use.text + "'");
        }
    }

    const Token& peek() const { return toks_[pos_]; }

    Token take()
    {
        Token t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    bool peek_punct(const char* p) const
    {
        return peek().kind == TokKind::Punct && peek().text == p;
    }

    void expect_punct(const char* p)
    {
        Token t = take();
        if (t.kind != TokKind::Punct || t.text != p)
            throw ParseError(t.line, t.col,
                             std::string("expected '") + p + "', got '" + t.text + "'");
    }

    void expect_ident(const char* kw)
    {
        Token t = take();
        if (t.kind != TokKind::Ident || t.text != kw)
            throw ParseError(t.line, t.col,
                             std::string("expected '") + kw + "', got '" + t.text + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(peek().line, peek().col, msg);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<VarDecl> decls_;
    std::set<std::string> branch_ids_;
    std::vector<Token> used_vars_;
};

}  // namespace detail

// Parses DSL source into a validated BranchTree. Throws ParseError with the
// offending line and column on malformed input, undeclared variables,
// zero-width or duplicate declarations, and duplicate branch labels.
inline BranchTree parse_program(const std::string& source)
{
    return detail::Parser(source).parse();
}

}  // namespace qse
