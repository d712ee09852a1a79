#pragma once

// AST for the condition language: variable declarations, unsigned arithmetic
// expressions (+, *), boolean conditions over six relational operators, and
// the branch tree of nested conditionals whose leaves are program branches.

#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VarDecl {
    std::string name;
    std::uint32_t width = 0;  // qubits allocated to this variable, >= 1
};

// ---------------------------------------------------------------------------
// Arithmetic expressions

enum class ArithKind { Variable, Constant, Add, Mul };

struct ArithExpr;
using ArithPtr = std::shared_ptr<const ArithExpr>;

struct ArithExpr {
    ArithKind kind = ArithKind::Constant;
    std::string name;          // Variable
    std::uint64_t value = 0;   // Constant
    ArithPtr lhs, rhs;         // Add / Mul

    static ArithPtr variable(std::string n)
    {
        auto e = std::make_shared<ArithExpr>();
        e->kind = ArithKind::Variable;
        e->name = std::move(n);
        return e;
    }
    static ArithPtr constant(std::uint64_t v)
    {
        auto e = std::make_shared<ArithExpr>();
        e->kind = ArithKind::Constant;
        e->value = v;
        return e;
    }
    static ArithPtr add(ArithPtr a, ArithPtr b)
    {
        auto e = std::make_shared<ArithExpr>();
        e->kind = ArithKind::Add;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }
    static ArithPtr mul(ArithPtr a, ArithPtr b)
    {
        auto e = std::make_shared<ArithExpr>();
        e->kind = ArithKind::Mul;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }
};

// ---------------------------------------------------------------------------
// Conditions

enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

enum class CondKind { Rel, And, Or, Not };

struct CondExpr;
using CondPtr = std::shared_ptr<const CondExpr>;

struct CondExpr {
    CondKind kind = CondKind::Rel;
    RelOp op = RelOp::Lt;  // Rel
    ArithPtr a, b;         // Rel operands
    CondPtr lhs, rhs;      // And / Or; Not stores its operand in lhs

    static CondPtr rel(ArithPtr a, RelOp op, ArithPtr b)
    {
        auto c = std::make_shared<CondExpr>();
        c->kind = CondKind::Rel;
        c->op = op;
        c->a = std::move(a);
        c->b = std::move(b);
        return c;
    }
    static CondPtr conj(CondPtr l, CondPtr r)
    {
        auto c = std::make_shared<CondExpr>();
        c->kind = CondKind::And;
        c->lhs = std::move(l);
        c->rhs = std::move(r);
        return c;
    }
    static CondPtr disj(CondPtr l, CondPtr r)
    {
        auto c = std::make_shared<CondExpr>();
        c->kind = CondKind::Or;
        c->lhs = std::move(l);
        c->rhs = std::move(r);
        return c;
    }
    static CondPtr negation(CondPtr inner)
    {
        auto c = std::make_shared<CondExpr>();
        c->kind = CondKind::Not;
        c->lhs = std::move(inner);
        return c;
    }
};

// ---------------------------------------------------------------------------
// Branch tree

enum class NodeKind { Leaf, If };

struct BranchNode;
using NodePtr = std::shared_ptr<const BranchNode>;

struct BranchNode {
    NodeKind kind = NodeKind::Leaf;
    std::string branch_id;           // Leaf
    CondPtr cond;                    // If
    NodePtr then_branch, else_branch;

    static NodePtr leaf(std::string id)
    {
        auto n = std::make_shared<BranchNode>();
        n->kind = NodeKind::Leaf;
        n->branch_id = std::move(id);
        return n;
    }
    static NodePtr branch(CondPtr c, NodePtr t, NodePtr e)
    {
        auto n = std::make_shared<BranchNode>();
        n->kind = NodeKind::If;
        n->cond = std::move(c);
        n->then_branch = std::move(t);
        n->else_branch = std::move(e);
        return n;
    }
};

struct BranchTree {
    std::vector<VarDecl> decls;
    NodePtr root;
};

// One entry per leaf: the conjunction of branch conditions, with polarity,
// that routes an input to that leaf. polarity == false means the condition
// was taken on its else side.
struct PathConstraint {
    std::string branch_id;
    std::vector<std::pair<CondPtr, bool>> conjuncts;
};

// ---------------------------------------------------------------------------
// Printing (canonical text; reparsing the output yields an identical tree)

inline const char* to_string(RelOp op)
{
    switch (op) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Eq: return "==";
    case RelOp::Ne: return "!=";
    }
    return "?";
}

namespace detail {

// Precedence levels: additive chains bind loosest, atoms tightest. A child
// printed at a level below `min_prec` gets parenthesized, which keeps the
// printed form structurally faithful under left-associative parsing.
inline void print_arith(std::ostream& os, const ArithPtr& e, int min_prec)
{
    switch (e->kind) {
    case ArithKind::Variable: os << e->name; return;
    case ArithKind::Constant: os << e->value; return;
    case ArithKind::Add:
        if (min_prec > 1) os << "(";
        print_arith(os, e->lhs, 1);
        os << "+";
        print_arith(os, e->rhs, 2);
        if (min_prec > 1) os << ")";
        return;
    case ArithKind::Mul:
        if (min_prec > 2) os << "(";
        print_arith(os, e->lhs, 2);
        os << "*";
        print_arith(os, e->rhs, 3);
        if (min_prec > 2) os << ")";
        return;
    }
}

inline void print_cond(std::ostream& os, const CondPtr& c, int min_prec)
{
    switch (c->kind) {
    case CondKind::Rel:
        print_arith(os, c->a, 1);
        os << to_string(c->op);
        print_arith(os, c->b, 1);
        return;
    case CondKind::Or:
        if (min_prec > 1) os << "(";
        print_cond(os, c->lhs, 1);
        os << " || ";
        print_cond(os, c->rhs, 2);
        if (min_prec > 1) os << ")";
        return;
    case CondKind::And:
        if (min_prec > 2) os << "(";
        print_cond(os, c->lhs, 2);
        os << " && ";
        print_cond(os, c->rhs, 3);
        if (min_prec > 2) os << ")";
        return;
    case CondKind::Not:
        os << "!(";
        print_cond(os, c->lhs, 1);
        os << ")";
        return;
    }
}

inline void print_node(std::ostream& os, const NodePtr& n)
{
    if (n->kind == NodeKind::Leaf) {
        os << "{" << n->branch_id << "}";
        return;
    }
    os << "if (";
    print_cond(os, n->cond, 1);
    os << ") ";
    print_node(os, n->then_branch);
    os << " else ";
    print_node(os, n->else_branch);
}

}  // namespace detail

inline std::string to_string(const ArithPtr& e)
{
    std::ostringstream os;
    detail::print_arith(os, e, 1);
    return os.str();
}

inline std::string to_string(const CondPtr& c)
{
    std::ostringstream os;
    detail::print_cond(os, c, 1);
    return os.str();
}

inline std::string to_string(const BranchTree& t)
{
    std::ostringstream os;
    for (const auto& d : t.decls) os << "var " << d.name << ":" << d.width << "; ";
    detail::print_node(os, t.root);
    return os.str();
}

// ---------------------------------------------------------------------------
// Structural equality

inline bool structurally_equal(const ArithPtr& a, const ArithPtr& b)
{
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case ArithKind::Variable: return a->name == b->name;
    case ArithKind::Constant: return a->value == b->value;
    default:
        return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

inline bool structurally_equal(const CondPtr& a, const CondPtr& b)
{
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case CondKind::Rel:
        return a->op == b->op && structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    case CondKind::Not:
        return structurally_equal(a->lhs, b->lhs);
    default:
        return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

inline bool structurally_equal(const NodePtr& a, const NodePtr& b)
{
    if (a->kind != b->kind) return false;
    if (a->kind == NodeKind::Leaf) return a->branch_id == b->branch_id;
    return structurally_equal(a->cond, b->cond) &&
           structurally_equal(a->then_branch, b->then_branch) &&
           structurally_equal(a->else_branch, b->else_branch);
}

inline bool structurally_equal(const BranchTree& a, const BranchTree& b)
{
    if (a.decls.size() != b.decls.size()) return false;
    for (std::size_t i = 0; i < a.decls.size(); ++i)
        if (a.decls[i].name != b.decls[i].name || a.decls[i].width != b.decls[i].width)
            return false;
    return structurally_equal(a.root, b.root);
}

// ---------------------------------------------------------------------------
// Tree queries

inline std::size_t leaf_count(const NodePtr& n)
{
    if (n->kind == NodeKind::Leaf) return 1;
    return leaf_count(n->then_branch) + leaf_count(n->else_branch);
}

inline std::size_t leaf_count(const BranchTree& t) { return leaf_count(t.root); }

namespace detail {

inline void collect_paths_rec(const NodePtr& n,
                              std::vector<std::pair<CondPtr, bool>>& prefix,
                              std::vector<PathConstraint>& out)
{
    if (n->kind == NodeKind::Leaf) {
        out.push_back({n->branch_id, prefix});
        return;
    }
    prefix.emplace_back(n->cond, true);
    collect_paths_rec(n->then_branch, prefix, out);
    prefix.back().second = false;
    collect_paths_rec(n->else_branch, prefix, out);
    prefix.pop_back();
}

// Registers every Rel/And/Or node reachable in a condition, skipping Not
// wrappers (negation never materializes as a circuit of its own).
template <typename Fn>
inline void for_each_material_node(const CondPtr& c, Fn&& fn)
{
    switch (c->kind) {
    case CondKind::Not:
        for_each_material_node(c->lhs, fn);
        return;
    case CondKind::Rel:
        fn(c);
        return;
    default:
        for_each_material_node(c->lhs, fn);
        for_each_material_node(c->rhs, fn);
        fn(c);
        return;
    }
}

template <typename Fn>
inline void for_each_if(const NodePtr& n, Fn&& fn)
{
    if (n->kind == NodeKind::Leaf) return;
    fn(n);
    for_each_if(n->then_branch, fn);
    for_each_if(n->else_branch, fn);
}

}  // namespace detail

// One PathConstraint per leaf, in then-before-else leaf order; the conjunct
// list length equals the leaf's depth.
inline std::vector<PathConstraint> collect_paths(const BranchTree& tree)
{
    std::vector<PathConstraint> out;
    std::vector<std::pair<CondPtr, bool>> prefix;
    detail::collect_paths_rec(tree.root, prefix, out);
    return out;
}

// Number of distinct condition nodes the synthesizer materializes as flag
// writers. Each structurally distinct Rel, And or Or counts once, even when
// a condition recurs at several branch sites; Not counts zero.
inline std::size_t count_conditions(const BranchTree& tree)
{
    std::vector<std::string> seen;
    detail::for_each_if(tree.root, [&](const NodePtr& n) {
        detail::for_each_material_node(n->cond, [&](const CondPtr& c) {
            std::string key = to_string(c);
            for (const auto& s : seen)
                if (s == key) return;
            seen.push_back(std::move(key));
        });
    });
    return seen.size();
}

// Total Rel+And+Or node occurrences, without dedup. count_conditions() is
// bounded above by this; they agree when no condition recurs.
inline std::size_t material_node_occurrences(const BranchTree& tree)
{
    std::size_t n = 0;
    detail::for_each_if(tree.root, [&](const NodePtr& node) {
        detail::for_each_material_node(node->cond, [&](const CondPtr&) { ++n; });
    });
    return n;
}

}  // namespace qse
