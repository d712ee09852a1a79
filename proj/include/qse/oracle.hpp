#pragma once

// Classical brute-force oracle: exact unsigned evaluation of the condition
// language over every variable assignment, routing each assignment to its
// leaf. Used as ground truth for the quantum partition.

#include <cstdint>
#include <string>
#include <vector>

#include "qse/ast.hpp"
#include "qse/partition.hpp"

namespace qse {

inline constexpr std::uint32_t kOracleBitCeiling = 24;  // at most 2^24 assignments

namespace detail {

inline std::uint64_t eval_arith(const ArithPtr& e, const std::vector<VarDecl>& decls,
                                const std::vector<std::uint64_t>& values)
{
    switch (e->kind) {
    case ArithKind::Variable:
        for (std::size_t i = 0; i < decls.size(); ++i)
            if (decls[i].name == e->name) return values[i];
        throw Error("undeclared variable '" + e->name + "'");
    case ArithKind::Constant: return e->value;
    case ArithKind::Add: return eval_arith(e->lhs, decls, values) + eval_arith(e->rhs, decls, values);
    case ArithKind::Mul: return eval_arith(e->lhs, decls, values) * eval_arith(e->rhs, decls, values);
    }
    throw Error("unreachable expression kind");
}

inline bool eval_cond(const CondPtr& c, const std::vector<VarDecl>& decls,
                      const std::vector<std::uint64_t>& values)
{
    switch (c->kind) {
    case CondKind::Rel: {
        const std::uint64_t a = eval_arith(c->a, decls, values);
        const std::uint64_t b = eval_arith(c->b, decls, values);
        switch (c->op) {
        case RelOp::Lt: return a < b;
        case RelOp::Le: return a <= b;
        case RelOp::Gt: return a > b;
        case RelOp::Ge: return a >= b;
        case RelOp::Eq: return a == b;
        case RelOp::Ne: return a != b;
        }
        return false;
    }
    case CondKind::And: return eval_cond(c->lhs, decls, values) && eval_cond(c->rhs, decls, values);
    case CondKind::Or: return eval_cond(c->lhs, decls, values) || eval_cond(c->rhs, decls, values);
    case CondKind::Not: return !eval_cond(c->lhs, decls, values);
    }
    throw Error("unreachable condition kind");
}

}  // namespace detail

// The leaf a concrete assignment reaches under classical evaluation.
inline const std::string& classical_branch(const BranchTree& tree,
                                           const std::vector<std::uint64_t>& values)
{
    const BranchNode* n = tree.root.get();
    while (n->kind == NodeKind::If)
        n = detail::eval_cond(n->cond, tree.decls, values) ? n->then_branch.get()
                                                           : n->else_branch.get();
    return n->branch_id;
}

// Enumerates all 2^n variable assignments and routes each to its branch.
// Subsets come out disjoint and exhaustive by construction.
inline Partition brute_force_partition(const BranchTree& tree,
                                       std::uint32_t bit_ceiling = kOracleBitCeiling)
{
    std::uint32_t n = 0;
    for (const auto& d : tree.decls) n += d.width;
    if (n > bit_ceiling)
        throw Error("input space of 2^" + std::to_string(n) +
                    " assignments exceeds the oracle ceiling of 2^" +
                    std::to_string(bit_ceiling));

    Partition part;
    for (const auto& d : tree.decls) {
        part.var_names.push_back(d.name);
        part.var_widths.push_back(d.width);
    }
    part.s_width = n;
    for (const auto& pc : collect_paths(tree)) part.branches.push_back({pc.branch_id, {}, {}});

    std::vector<std::uint64_t> values(tree.decls.size(), 0);
    const std::uint64_t space = std::uint64_t(1) << n;
    for (std::uint64_t s = 0; s < space; ++s) {
        std::uint64_t rest = s;
        for (std::size_t v = 0; v < tree.decls.size(); ++v) {
            values[v] = rest & ((std::uint64_t(1) << tree.decls[v].width) - 1);
            rest >>= tree.decls[v].width;
        }
        const std::string& id = classical_branch(tree, values);
        for (auto& b : part.branches)
            if (b.branch_id == id) {
                b.cases.push_back({values});
                break;
            }
    }
    for (auto& b : part.branches) std::sort(b.cases.begin(), b.cases.end());
    if (part.total_cases() != space)
        throw Error("oracle routed " + std::to_string(part.total_cases()) + " of " +
                    std::to_string(space) + " assignments to a known branch");
    return part;
}

}  // namespace qse
