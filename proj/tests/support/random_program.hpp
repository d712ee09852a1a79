#pragma once

// Seeded random program generator for property tests: small variable
// registers, branch trees up to a configurable depth, and conditions drawn
// from every relational and logical operator. Programs are rejection-sampled
// until the planned layout fits a qubit cap, which keeps simulation cheap
// while still exercising the full operator mix.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qse/ast.hpp"
#include "qse/synth.hpp"

namespace qse::testing {

struct GenConfig {
    std::uint32_t max_depth = 3;
    std::uint32_t max_vars = 3;
    std::uint32_t max_total_width = 10;
    std::uint32_t max_total_qubits = 19;  // keeps a single run well under a second
    std::uint32_t max_cond_depth = 2;
    bool allow_not = true;
    bool allow_logical = true;
};

class ProgramGen {
public:
    explicit ProgramGen(std::uint64_t seed, GenConfig cfg = {}) : rng_(seed), cfg_(cfg) {}

    BranchTree next()
    {
        for (int attempt = 0; attempt < 200; ++attempt) {
            BranchTree t = candidate();
            try {
                (void)plan_layout(t, cfg_.max_total_qubits);
                return t;
            } catch (const Error&) {
                // too wide; draw again
            }
        }
        throw Error("program generator failed to fit the qubit cap");
    }

    std::mt19937_64& rng() { return rng_; }

private:
    BranchTree candidate()
    {
        BranchTree t;
        const std::uint32_t nvars = pick(1, cfg_.max_vars);
        std::uint32_t budget = cfg_.max_total_width;
        for (std::uint32_t i = 0; i < nvars; ++i) {
            const std::uint32_t maxw = std::min<std::uint32_t>(3, budget - (nvars - i - 1));
            const std::uint32_t w = pick(1, maxw);
            budget -= w;
            t.decls.push_back({std::string(1, static_cast<char>('a' + i)), w});
        }
        leaf_counter_ = 0;
        t.root = gen_tree(t.decls, 0);
        if (t.root->kind == NodeKind::Leaf) {
            // always at least one condition, so the flag machinery is exercised
            leaf_counter_ = 0;
            t.root = BranchNode::branch(gen_cond(t.decls, 0), gen_tree(t.decls, cfg_.max_depth),
                                        gen_tree(t.decls, cfg_.max_depth));
        }
        return t;
    }

    NodePtr gen_tree(const std::vector<VarDecl>& decls, std::uint32_t depth)
    {
        const bool leaf = depth >= cfg_.max_depth || pick(0, 99) < 25 + 25 * depth;
        if (leaf) return BranchNode::leaf("b" + std::to_string(leaf_counter_++));
        return BranchNode::branch(gen_cond(decls, 0), gen_tree(decls, depth + 1),
                                  gen_tree(decls, depth + 1));
    }

    CondPtr gen_cond(const std::vector<VarDecl>& decls, std::uint32_t depth)
    {
        const std::uint32_t roll = pick(0, 99);
        if (cfg_.allow_not && roll < 12 && depth < cfg_.max_cond_depth)
            return CondExpr::negation(gen_cond(decls, depth + 1));
        if (cfg_.allow_logical && depth < cfg_.max_cond_depth && roll < 40) {
            CondPtr l = gen_cond(decls, depth + 1);
            CondPtr r = gen_cond(decls, depth + 1);
            return roll < 26 ? CondExpr::conj(l, r) : CondExpr::disj(l, r);
        }
        static constexpr RelOp ops[] = {RelOp::Lt, RelOp::Le, RelOp::Gt,
                                        RelOp::Ge, RelOp::Eq, RelOp::Ne};
        return CondExpr::rel(gen_arith(decls, 0), ops[pick(0, 5)], gen_arith(decls, 0));
    }

    ArithPtr gen_arith(const std::vector<VarDecl>& decls, std::uint32_t depth)
    {
        const std::uint32_t roll = pick(0, 99);
        if (depth < 1 && roll >= 80) {
            ArithPtr l = gen_arith(decls, depth + 1);
            ArithPtr r = gen_arith(decls, depth + 1);
            return roll < 92 ? ArithExpr::add(l, r) : ArithExpr::mul(l, r);
        }
        if (roll < 55) {
            const auto& d = decls[pick(0, static_cast<std::uint32_t>(decls.size() - 1))];
            return ArithExpr::variable(d.name);
        }
        std::uint32_t maxw = 1;
        for (const auto& d : decls) maxw = std::max(maxw, d.width);
        // constants may exceed every variable's range, leaving some branches empty
        return ArithExpr::constant(pick(0, (1u << maxw) + (1u << maxw) / 2));
    }

    std::uint32_t pick(std::uint32_t lo, std::uint32_t hi)
    {
        return lo + static_cast<std::uint32_t>(rng_() % (hi - lo + 1));
    }

    std::mt19937_64 rng_;
    GenConfig cfg_;
    std::uint32_t leaf_counter_ = 0;
};

}  // namespace qse::testing
