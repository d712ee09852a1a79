#pragma once

// Circuit synthesis: plans the qubit layout for a branch tree (variable
// registers, a reusable scratch pool, and flag qubits), then compiles the
// tree into a preparation fragment plus a body fragment whose flag qubits
// end up entangled with the input register so that each basis input carries
// the label of the branch it exercises.
//
// Layout of the qubit index space (little-endian):
//   [ variables, declaration order | scratch pool | flag qubits ]
//
// Each relational condition owns an adjacent flag pair (hi, lo) written by a
// comparator as (greater, less); each AND/OR owns one flag qubit. Conditions
// whose branch-site regions are provably disjoint (they diverge at a common
// ancestor conditional) may share flag qubits, which is what keeps the flag
// register small for sibling subtrees. A condition recurring at several
// branch sites is materialized once per non-nested site and counted once.
//
// Negation costs no gates: it only swaps the satisfying and complementary
// control recipes of its operand.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qse/arith.hpp"
#include "qse/ast.hpp"
#include "qse/circuit.hpp"
#include "qse/statevector.hpp"

namespace qse {

// ---------------------------------------------------------------------------
// Control recipes

// A disjunction of conjunctive control arms. The arms produced by synthesis
// are pairwise disjoint as predicates, so "apply once per arm" applies an
// action at most once on any basis state. An empty arm list is "never"; a
// single empty arm is "always".
struct ControlRecipe {
    std::vector<std::vector<Control>> arms;

    static ControlRecipe always() { return {{{}}}; }
    static ControlRecipe never() { return {}; }
    bool is_never() const { return arms.empty(); }
    bool is_always() const { return arms.size() == 1 && arms[0].empty(); }
};

namespace detail {

// Conjunction of two control lists; nullopt when they demand opposite
// polarities of one qubit (the combined condition is unsatisfiable).
inline std::optional<std::vector<Control>> merge_controls(const std::vector<Control>& a,
                                                          const std::vector<Control>& b)
{
    std::vector<Control> out = a;
    for (const Control& c : b) {
        bool dup = false;
        for (const Control& e : out) {
            if (e.qubit != c.qubit) continue;
            if (e.value != c.value) return std::nullopt;
            dup = true;
            break;
        }
        if (!dup) out.push_back(c);
    }
    return out;
}

}  // namespace detail

inline ControlRecipe conjoin(const ControlRecipe& a, const ControlRecipe& b)
{
    ControlRecipe out;
    for (const auto& x : a.arms)
        for (const auto& y : b.arms)
            if (auto m = detail::merge_controls(x, y)) out.arms.push_back(std::move(*m));
    return out;
}

// Control recipe selecting the flag states that satisfy a relational
// operator, over the operator's flag pair (hi carries "greater", lo carries
// "less"). != needs two arms ("01" or "10"); the other operators need one.
inline ControlRecipe t_module(RelOp op, QubitId hi, QubitId lo)
{
    switch (op) {
    case RelOp::Lt: return {{{{hi, false}, {lo, true}}}};
    case RelOp::Le: return {{{{hi, false}}}};
    case RelOp::Gt: return {{{{hi, true}, {lo, false}}}};
    case RelOp::Ge: return {{{{lo, false}}}};
    case RelOp::Eq: return {{{{hi, false}, {lo, false}}}};
    case RelOp::Ne: return {{{{hi, false}, {lo, true}}, {{hi, true}, {lo, false}}}};
    }
    return ControlRecipe::never();
}

// Complementary recipe: selects exactly the reachable flag states where the
// operator is not satisfied. Single-qubit form wherever the flag table
// allows one (<, <=, >, >=), two-control forms for == / !=.
inline ControlRecipe t_module_complement(RelOp op, QubitId hi, QubitId lo)
{
    switch (op) {
    case RelOp::Lt: return {{{{lo, false}}}};
    case RelOp::Le: return {{{{hi, true}}}};
    case RelOp::Gt: return {{{{hi, false}}}};
    case RelOp::Ge: return {{{{lo, true}}}};
    case RelOp::Eq: return t_module(RelOp::Ne, hi, lo);
    case RelOp::Ne: return t_module(RelOp::Eq, hi, lo);
    }
    return ControlRecipe::never();
}

// ---------------------------------------------------------------------------
// Layout

using TreeEdge = std::pair<const BranchNode*, bool>;  // (conditional, took-then)
using TreePath = std::vector<TreeEdge>;

namespace detail {

// True when one path is a (possibly improper) prefix of the other, i.e. the
// two branch sites do not lie in divergent subtrees.
inline bool prefix_related(const TreePath& a, const TreePath& b)
{
    const std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace detail

// One materialized flag-writing condition: a relational comparison (two
// adjacent flag qubits) or an AND/OR combiner (one flag qubit), together
// with every branch site the condition appears at.
struct FlagWriter {
    std::string key;  // canonical condition text
    CondPtr node;
    bool is_rel = false;
    std::vector<TreePath> occurrences;
    std::vector<QubitId> flags;  // rel: {lo, hi}; and/or: {flag}; absolute ids
    std::uint32_t scratch_need = 0;
    std::vector<NamedRange> scratch_breakdown;

    QubitId flag_lo() const { return flags[0]; }
    QubitId flag_hi() const { return flags[1]; }
};

struct VariableLayout {
    std::vector<VarDecl> decls;          // declaration order
    std::vector<RegRange> var_ranges;    // parallel to decls
    std::uint32_t s_width = 0;           // n
    RegRange scratch;                    // shared, fully uncomputed pool
    QubitId flag_base = 0;
    std::uint32_t flag_width = 0;        // m
    std::uint32_t total_qubits = 0;
    std::uint32_t ceiling = kDefaultQubitCeiling;
    std::vector<FlagWriter> writers;     // discovery order

    const RegRange& var_range(const std::string& name) const
    {
        for (std::size_t i = 0; i < decls.size(); ++i)
            if (decls[i].name == name) return var_ranges[i];
        throw Error("unknown variable '" + name + "'");
    }

    const FlagWriter& writer(const std::string& key) const
    {
        for (const auto& w : writers)
            if (w.key == key) return w;
        throw Error("no flag writer for condition '" + key + "'");
    }

    bool has_writer(const std::string& key) const
    {
        for (const auto& w : writers)
            if (w.key == key) return true;
        return false;
    }
};

namespace detail {

struct ScratchPool {
    QubitId base = 0;
    std::uint32_t capacity = 0;
    std::uint32_t used = 0;
    std::vector<NamedRange>* log = nullptr;

    RegRange take(std::uint32_t width, const char* label)
    {
        if (used + width > capacity)
            throw Error("scratch pool overflow while building a relational fragment");
        RegRange r{base + used, width};
        used += width;
        if (log) log->push_back({label, r});
        return r;
    }
};

inline std::uint32_t const_width(std::uint64_t v)
{
    std::uint32_t w = 0;
    while (v) {
        ++w;
        v >>= 1;
    }
    return std::max<std::uint32_t>(w, 1);
}

// Compiles an arithmetic expression into a register handle, appending the
// compute gates. Temporaries come from the pool; a fresh copy is spliced in
// when both operands of a binary node resolve to overlapping registers
// (e.g. x+x), since the arithmetic fragments require disjoint operands.
struct ExprCompiler {
    const VariableLayout& layout;
    ScratchPool& pool;
    std::vector<Gate> gates;

    RegRange compile(const ArithPtr& e)
    {
        switch (e->kind) {
        case ArithKind::Variable: return layout.var_range(e->name);
        case ArithKind::Constant: {
            RegRange r = pool.take(const_width(e->value), "const");
            for (std::uint32_t i = 0; i < r.width; ++i)
                if ((e->value >> i) & 1) gates.push_back(Gate::x(r.bit(i)));
            return r;
        }
        case ArithKind::Add: {
            RegRange a = compile(e->lhs);
            RegRange b = disjoint_from(compile(e->rhs), a);
            const std::uint32_t n = std::max(a.width, b.width);
            RegRange sum = pool.take(n + 1, "sum");
            RegRange car = pool.take(n, "carry");
            append(adder_fragment(a, b, sum, car).gates);
            return sum;
        }
        case ArithKind::Mul: {
            RegRange a = compile(e->lhs);
            RegRange b = disjoint_from(compile(e->rhs), a);
            RegRange prod = pool.take(a.width + b.width, "prod");
            RegRange car = pool.take(1, "mul_carry");
            append(multiplier_fragment(a, b, prod, car).gates);
            return prod;
        }
        }
        throw Error("unreachable expression kind");
    }

    RegRange disjoint_from(RegRange reg, const RegRange& other)
    {
        if (!reg.overlaps(other)) return reg;
        RegRange copy = pool.take(reg.width, "copy");
        append(copy_fragment(reg, copy).gates);
        return copy;
    }

    void append(const std::vector<Gate>& gs) { gates.insert(gates.end(), gs.begin(), gs.end()); }
};

struct RelBuild {
    CircuitFragment fragment;
    std::uint32_t scratch_used = 0;
    std::vector<NamedRange> breakdown;
};

// Full relational fragment: compute both expression values, compare them
// onto the flag pair, then uncompute expressions and scratch so the pool is
// reusable by the next condition.
inline RelBuild build_relational(const CondExpr& rel, const VariableLayout& layout,
                                 QubitId pool_base, std::uint32_t pool_capacity, QubitId flag_hi,
                                 QubitId flag_lo)
{
    RelBuild out;
    ScratchPool pool{pool_base, pool_capacity, 0, &out.breakdown};
    ExprCompiler ec{layout, pool, {}};

    RegRange e1 = ec.compile(rel.a);
    RegRange e2 = ec.disjoint_from(ec.compile(rel.b), e1);
    RegRange chain = pool.take(std::max(e1.width, e2.width), "cmp_chain");

    CircuitFragment& f = out.fragment;
    f.gates = ec.gates;
    f.append(comparator_fragment(e1, e2, flag_hi, flag_lo, chain));
    for (auto it = ec.gates.rbegin(); it != ec.gates.rend(); ++it) f.add(*it);

    f.registers = {{"phi1", e1}, {"phi2", e2}};
    f.ancillas = out.breakdown;
    out.scratch_used = pool.used;
    return out;
}

inline std::string writer_key(const CondPtr& c) { return to_string(c); }

inline void collect_writers(const BranchTree& tree, std::vector<FlagWriter>& writers)
{
    std::map<std::string, std::size_t> index;
    TreePath path;

    auto visit_cond = [&](const CondPtr& cond) {
        for_each_material_node(cond, [&](const CondPtr& node) {
            std::string key = writer_key(node);
            auto it = index.find(key);
            if (it == index.end()) {
                FlagWriter w;
                w.key = key;
                w.node = node;
                w.is_rel = node->kind == CondKind::Rel;
                w.occurrences.push_back(path);
                index.emplace(std::move(key), writers.size());
                writers.push_back(std::move(w));
            } else {
                auto& occ = writers[it->second].occurrences;
                bool dup = false;
                for (const auto& p : occ)
                    if (p == path) {
                        dup = true;
                        break;
                    }
                if (!dup) occ.push_back(path);
            }
        });
    };

    // Preorder walk carrying the branch-site path.
    auto rec = [&](auto&& self, const NodePtr& n) -> void {
        if (n->kind == NodeKind::Leaf) return;
        visit_cond(n->cond);
        path.emplace_back(n.get(), true);
        self(self, n->then_branch);
        path.back().second = false;
        self(self, n->else_branch);
        path.pop_back();
    };
    rec(rec, tree.root);
}

inline bool writers_interfere(const FlagWriter& a, const FlagWriter& b)
{
    for (const auto& p : a.occurrences)
        for (const auto& q : b.occurrences)
            if (prefix_related(p, q)) return true;
    return false;
}

}  // namespace detail

// Plans the full qubit layout for a branch tree: variable registers in
// declaration order, a scratch pool sized for the widest relational
// condition (every condition uncomputes it, so it is shared), and flag
// qubits allocated low-to-high in condition discovery order, with reuse
// across conditions whose branch sites diverge.
inline VariableLayout plan_layout(const BranchTree& tree,
                                  std::uint32_t ceiling = kDefaultQubitCeiling)
{
    VariableLayout L;
    L.ceiling = ceiling;
    L.decls = tree.decls;
    QubitId next = 0;
    for (const auto& d : tree.decls) {
        if (d.width == 0) throw Error("variable '" + d.name + "' has zero width");
        L.var_ranges.push_back({next, d.width});
        next += d.width;
    }
    L.s_width = next;

    detail::collect_writers(tree, L.writers);

    // Size the scratch pool from a dry build of every relational condition.
    // Sentinel flag targets keep the comparator's overlap checks happy; the
    // gates are discarded.
    std::uint32_t pool_size = 0;
    std::string widest;
    for (auto& w : L.writers) {
        if (!w.is_rel) continue;
        const QubitId sentinel = 1u << 20;
        detail::RelBuild dry = detail::build_relational(*w.node, L, sentinel + 2, 1u << 19,
                                                        sentinel, sentinel + 1);
        w.scratch_need = dry.scratch_used;
        w.scratch_breakdown = dry.breakdown;
        // rebase breakdown to the final pool position
        if (w.scratch_need > pool_size) {
            pool_size = w.scratch_need;
            widest = w.key;
        }
    }
    L.scratch = {L.s_width, pool_size};
    for (auto& w : L.writers)
        for (auto& nr : w.scratch_breakdown)
            nr.range.first = nr.range.first - ((1u << 20) + 2) + L.scratch.first;

    // Flag allocation: greedy lowest-free-index, honoring interference. Two
    // writers may share qubits only if every pair of their branch sites
    // diverges at a common ancestor conditional.
    L.flag_base = L.s_width + pool_size;
    std::vector<std::vector<QubitId>> assigned;  // local indices per writer
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < L.writers.size(); ++i) {
        const std::uint32_t need = L.writers[i].is_rel ? 2 : 1;
        std::uint32_t base = 0;
        for (;; ++base) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                if (!detail::writers_interfere(L.writers[i], L.writers[j])) continue;
                for (QubitId q : assigned[j])
                    if (q >= base && q < base + need) {
                        ok = false;
                        break;
                    }
            }
            if (ok) break;
        }
        std::vector<QubitId> local;
        for (std::uint32_t k = 0; k < need; ++k) local.push_back(base + k);
        m = std::max(m, base + need);
        assigned.push_back(local);
        L.writers[i].flags.clear();
        for (QubitId q : local) L.writers[i].flags.push_back(L.flag_base + q);
    }
    L.flag_width = m;
    L.total_qubits = L.s_width + pool_size + m;

    if (L.total_qubits > ceiling) {
        std::ostringstream os;
        os << "layout needs " << L.total_qubits << " qubits (variables " << L.s_width
           << ", scratch " << pool_size << ", flags " << m << "), exceeding the ceiling of "
           << ceiling;
        if (!widest.empty()) {
            os << "; widest condition '" << widest << "' uses:";
            for (const auto& w : L.writers)
                if (w.key == widest)
                    for (const auto& nr : w.scratch_breakdown)
                        os << " " << nr.name << "=" << nr.range.width;
        }
        throw Error(os.str());
    }
    return L;
}

// ---------------------------------------------------------------------------
// Flag dictionary

struct PatternArm {
    std::uint64_t mask = 0;   // over local flag indices
    std::uint64_t value = 0;
    std::string text;         // most-significant flag first, '*' = unconstrained

    bool matches(std::uint64_t flag_bits) const { return (flag_bits & mask) == value; }
};

struct BranchPattern {
    std::string branch_id;
    std::vector<PatternArm> arms;  // empty = branch unreachable
};

struct ConditionRecord {
    std::string key;
    bool is_rel = false;
    RelOp op = RelOp::Lt;
    std::vector<QubitId> flags;
};

struct FlagDictionary {
    std::uint32_t flag_width = 0;
    QubitId flag_base = 0;
    std::vector<BranchPattern> branches;
    std::vector<ConditionRecord> conditions;

    // Picks the most specific matching arm (fewest '*'). The disjointness
    // invariant makes the order irrelevant for correct circuits; it only
    // sharpens error reporting on broken ones. Stateless, so a compiled
    // dictionary can be shared across decoding threads.
    int match(std::uint64_t flag_bits) const
    {
        int best = -1;
        int best_bits = -1;
        for (std::size_t b = 0; b < branches.size(); ++b)
            for (const auto& arm : branches[b].arms) {
                if (!arm.matches(flag_bits)) continue;
                const int bits = popcount(arm.mask);
                if (bits > best_bits) {
                    best_bits = bits;
                    best = static_cast<int>(b);
                }
            }
        return best;
    }

    // No flag bitstring may satisfy the patterns of two different branches.
    bool patterns_disjoint() const
    {
        for (std::size_t i = 0; i < branches.size(); ++i)
            for (std::size_t j = i + 1; j < branches.size(); ++j)
                for (const auto& x : branches[i].arms)
                    for (const auto& y : branches[j].arms) {
                        const std::uint64_t both = x.mask & y.mask;
                        if (((x.value ^ y.value) & both) == 0) return false;
                    }
        return true;
    }

private:
    static int popcount(std::uint64_t v)
    {
        int c = 0;
        while (v) {
            c += static_cast<int>(v & 1);
            v >>= 1;
        }
        return c;
    }
};

inline std::string pattern_text(std::uint64_t mask, std::uint64_t value, std::uint32_t m)
{
    std::string s(m, '*');
    for (std::uint32_t i = 0; i < m; ++i) {
        const std::uint64_t bit = std::uint64_t(1) << (m - 1 - i);
        if (mask & bit) s[i] = (value & bit) ? '1' : '0';
    }
    return s;
}

// One line per branch: "<branch_id> <pattern>" with multi-arm patterns
// joined by '|'; condition records follow as comments.
inline void write_dictionary(std::ostream& os, const FlagDictionary& dict)
{
    os << "# flag qubits: " << dict.flag_width << " (base " << dict.flag_base
       << "), most-significant flag first\n";
    for (const auto& b : dict.branches) {
        os << b.branch_id << " ";
        if (b.arms.empty()) {
            os << "<unreachable>";
        } else {
            for (std::size_t i = 0; i < b.arms.size(); ++i) {
                if (i) os << "|";
                os << b.arms[i].text;
            }
        }
        os << "\n";
    }
    for (const auto& c : dict.conditions) {
        os << "# condition " << c.key << " flags=[";
        for (std::size_t i = 0; i < c.flags.size(); ++i) {
            if (i) os << ",";
            os << c.flags[i];
        }
        os << "]" << (c.is_rel ? std::string(" op=") + to_string(c.op) : std::string("")) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Fragment-level synthesis operations

// H on every variable qubit, identity elsewhere: maps |0...0> to the uniform
// superposition over all variable assignments with flags left at |0>.
inline CircuitFragment prepare_space(const VariableLayout& layout)
{
    CircuitFragment f;
    for (std::size_t i = 0; i < layout.decls.size(); ++i)
        f.registers.push_back({layout.decls[i].name, layout.var_ranges[i]});
    if (layout.scratch.width) f.registers.push_back({"scratch", layout.scratch});
    if (layout.flag_width) f.registers.push_back({"flags", {layout.flag_base, layout.flag_width}});
    for (QubitId q = 0; q < layout.s_width; ++q) f.add(Gate::h(q));
    return f;
}

// Satisfying (satisfied=true) or complementary control recipe of a
// condition. Negation swaps the two; AND/OR conditions are controlled by
// their single output flag.
inline ControlRecipe condition_recipe(const CondPtr& cond, bool satisfied,
                                      const VariableLayout& layout)
{
    switch (cond->kind) {
    case CondKind::Not: return condition_recipe(cond->lhs, !satisfied, layout);
    case CondKind::Rel: {
        const FlagWriter& w = layout.writer(detail::writer_key(cond));
        return satisfied ? t_module(cond->op, w.flag_hi(), w.flag_lo())
                         : t_module_complement(cond->op, w.flag_hi(), w.flag_lo());
    }
    default: {
        const FlagWriter& w = layout.writer(detail::writer_key(cond));
        return ControlRecipe{{{{w.flags[0], satisfied}}}};
    }
    }
}

// Relational condition as a circuit fragment: computes both expression
// values into scratch, compares them onto the condition's flag pair, then
// uncomputes all scratch. The entire fragment fires only where `controls`
// matches (once per arm; arms are disjoint).
inline CircuitFragment relational_fragment(const CondPtr& rel, const VariableLayout& layout,
                                           const ControlRecipe& controls = ControlRecipe::always())
{
    if (rel->kind != CondKind::Rel) throw Error("relational_fragment: not a relational condition");
    const FlagWriter& w = layout.writer(detail::writer_key(rel));
    detail::RelBuild build = detail::build_relational(*rel, layout, layout.scratch.first,
                                                      layout.scratch.width, w.flag_hi(),
                                                      w.flag_lo());
    if (controls.is_always()) return build.fragment;
    CircuitFragment out;
    out.registers = build.fragment.registers;
    out.ancillas = build.fragment.ancillas;
    for (const auto& arm : controls.arms) out.append(controlled(build.fragment, arm));
    return out;
}

// Flips out_flag exactly where both operand recipes are satisfied (multi-
// controlled X per arm pair; != operands expand into their arm cross
// product). `extra` carries the branch-site controls of a nested condition.
inline CircuitFragment logical_and_fragment(const ControlRecipe& lhs, const ControlRecipe& rhs,
                                            QubitId out_flag,
                                            const ControlRecipe& extra = ControlRecipe::always())
{
    CircuitFragment f;
    const ControlRecipe gated = conjoin(extra, conjoin(lhs, rhs));
    for (const auto& arm : gated.arms) f.add(Gate::x(out_flag, arm));
    return f;
}

// out_flag <- lhs OR rhs as three gate groups: flip on lhs, flip on rhs,
// flip on lhs AND rhs to correct the double count.
inline CircuitFragment logical_or_fragment(const ControlRecipe& lhs, const ControlRecipe& rhs,
                                           QubitId out_flag,
                                           const ControlRecipe& extra = ControlRecipe::always())
{
    CircuitFragment f;
    for (const auto& arm : conjoin(extra, lhs).arms) f.add(Gate::x(out_flag, arm));
    for (const auto& arm : conjoin(extra, rhs).arms) f.add(Gate::x(out_flag, arm));
    for (const auto& arm : conjoin(extra, conjoin(lhs, rhs)).arms) f.add(Gate::x(out_flag, arm));
    return f;
}

// ---------------------------------------------------------------------------
// Whole-tree compilation

struct QseCircuit {
    CircuitFragment prep;
    CircuitFragment body;
    VariableLayout layout;
    FlagDictionary dictionary;

    CircuitFragment full_fragment() const
    {
        CircuitFragment f = prep;
        f.gates.insert(f.gates.end(), body.gates.begin(), body.gates.end());
        f.ancillas.insert(f.ancillas.end(), body.ancillas.begin(), body.ancillas.end());
        return f;
    }
};

namespace detail {

struct EmitCtx {
    const VariableLayout& layout;
    CircuitFragment body;
    std::vector<BranchPattern> branches;
};

inline std::vector<PatternArm> arms_from_recipe(const ControlRecipe& recipe,
                                                const VariableLayout& L)
{
    std::vector<PatternArm> arms;
    for (const auto& arm : recipe.arms) {
        PatternArm pa;
        for (const Control& c : arm) {
            const std::uint64_t bit = std::uint64_t(1) << (c.qubit - L.flag_base);
            pa.mask |= bit;
            if (c.value) pa.value |= bit;
        }
        pa.text = pattern_text(pa.mask, pa.value, L.flag_width);
        arms.push_back(std::move(pa));
    }
    return arms;
}

// A branch site is redundant when the same condition already fired at an
// ancestor site: the ancestor's write covers the entire nested region.
inline bool occurrence_redundant(const FlagWriter& w, const TreePath& path)
{
    for (const auto& occ : w.occurrences)
        if (occ.size() < path.size() && prefix_related(occ, path)) return true;
    return false;
}

inline void emit_condition(const CondPtr& cond, const TreePath& path, const ControlRecipe& site,
                           EmitCtx& ctx)
{
    std::vector<std::string> done;
    for_each_material_node(cond, [&](const CondPtr& node) {
        const std::string key = writer_key(node);
        for (const auto& d : done)
            if (d == key) return;
        done.push_back(key);

        const FlagWriter& w = ctx.layout.writer(key);
        if (occurrence_redundant(w, path)) return;

        if (w.is_rel) {
            ctx.body.append(relational_fragment(node, ctx.layout, site));
            return;
        }
        const ControlRecipe lhs = condition_recipe(node->lhs, true, ctx.layout);
        const ControlRecipe rhs = condition_recipe(node->rhs, true, ctx.layout);
        if (node->kind == CondKind::And)
            ctx.body.append(logical_and_fragment(lhs, rhs, w.flags[0], site));
        else
            ctx.body.append(logical_or_fragment(lhs, rhs, w.flags[0], site));
    });
}

inline void compile_walk(const NodePtr& n, TreePath& path, const ControlRecipe& recipe,
                         EmitCtx& ctx)
{
    if (n->kind == NodeKind::Leaf) {
        ctx.branches.push_back({n->branch_id, arms_from_recipe(recipe, ctx.layout)});
        return;
    }
    emit_condition(n->cond, path, recipe, ctx);
    const ControlRecipe then_r = conjoin(recipe, condition_recipe(n->cond, true, ctx.layout));
    const ControlRecipe else_r = conjoin(recipe, condition_recipe(n->cond, false, ctx.layout));
    path.emplace_back(n.get(), true);
    compile_walk(n->then_branch, path, then_r, ctx);
    path.back().second = false;
    compile_walk(n->else_branch, path, else_r, ctx);
    path.pop_back();
}

}  // namespace detail

// Compiles a branch tree against its planned layout. The root condition's
// fragment is uncontrolled; every nested condition is controlled by the
// conjunction of the flag recipes along its branch-site path, so sibling
// conditions sharing flag qubits never fire on the same basis state.
inline QseCircuit compile_qse(const BranchTree& tree, const VariableLayout& layout)
{
    QseCircuit qc;
    qc.layout = layout;
    qc.prep = prepare_space(layout);

    detail::EmitCtx ctx{layout, {}, {}};
    TreePath path;
    detail::compile_walk(tree.root, path, ControlRecipe::always(), ctx);

    qc.body = std::move(ctx.body);
    qc.dictionary.flag_width = layout.flag_width;
    qc.dictionary.flag_base = layout.flag_base;
    qc.dictionary.branches = std::move(ctx.branches);
    for (const auto& w : layout.writers) {
        ConditionRecord rec;
        rec.key = w.key;
        rec.is_rel = w.is_rel;
        if (w.is_rel) rec.op = w.node->op;
        rec.flags = w.flags;
        qc.dictionary.conditions.push_back(std::move(rec));
    }
    return qc;
}

}  // namespace qse
