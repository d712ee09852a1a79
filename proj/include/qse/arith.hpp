#pragma once

// Reversible arithmetic fragments: out-of-place ripple-carry adder, shift-add
// multiplier built from controlled in-place (MAJ/UMA) adders, and a
// three-way comparator writing a (greater, less) flag pair. All fragments
// leave their inputs unchanged and return every ancilla to |0> on each
// computational-basis input.
//
// Operands of unequal width are supported directly: a missing high bit acts
// as a constant 0, so gates conditioned on it being 1 are dropped and
// 0-controls on it disappear.

#include <cstdint>
#include <optional>
#include <vector>

#include "qse/circuit.hpp"

namespace qse {

namespace detail {

inline std::optional<QubitId> reg_bit(const RegRange& r, std::uint32_t i)
{
    if (i < r.width) return r.bit(i);
    return std::nullopt;
}

// Multi-controlled X where controls may sit on absent (constant-0) bits:
// a 0-control on an absent bit is vacuous, a 1-control kills the gate.
inline void add_mcx(std::vector<Gate>& gates, QubitId target,
                    const std::vector<std::pair<std::optional<QubitId>, bool>>& ctrls)
{
    std::vector<Control> cs;
    for (const auto& [q, v] : ctrls) {
        if (!q) {
            if (v) return;  // control on constant 0 requiring 1: never fires
            continue;
        }
        cs.push_back({*q, v});
    }
    gates.push_back(Gate::x(target, std::move(cs)));
}

}  // namespace detail

// Copies the computational-basis content of src onto dst (dst initially |0>).
inline CircuitFragment copy_fragment(const RegRange& src, const RegRange& dst)
{
    if (dst.width < src.width) throw Error("copy: destination narrower than source");
    if (src.overlaps(dst)) throw Error("copy: overlapping registers");
    CircuitFragment f;
    for (std::uint32_t i = 0; i < src.width; ++i) f.add(Gate::cnot(src.bit(i), dst.bit(i)));
    return f;
}

// sum <- a + b. sum must be max(width(a), width(b)) + 1 qubits and initially
// |0>; carries provides max(width(a), width(b)) ancilla qubits. a and b are
// unchanged, carries are restored.
inline CircuitFragment adder_fragment(const RegRange& a, const RegRange& b, const RegRange& sum,
                                      const RegRange& carries)
{
    const std::uint32_t n = std::max(a.width, b.width);
    if (sum.width != n + 1) throw Error("adder: sum register must be max operand width + 1");
    if (carries.width < n) throw Error("adder: needs one carry ancilla per operand bit");
    if (a.overlaps(b) || a.overlaps(sum) || b.overlaps(sum) || carries.overlaps(a) ||
        carries.overlaps(b) || carries.overlaps(sum))
        throw Error("adder: registers overlap");

    CircuitFragment f;
    f.registers = {{"a", a}, {"b", b}, {"sum", sum}};
    f.ancillas = {{"carry", {carries.first, n}}};

    // carries[i] holds the carry out of bit i: majority(a_i, b_i, carry_in),
    // assembled as the XOR of the three pairwise ANDs.
    std::vector<Gate> carry_gates;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto ai = detail::reg_bit(a, i);
        const auto bi = detail::reg_bit(b, i);
        const std::optional<QubitId> cin =
            i > 0 ? std::optional<QubitId>(carries.bit(i - 1)) : std::nullopt;
        detail::add_mcx(carry_gates, carries.bit(i), {{ai, true}, {bi, true}});
        detail::add_mcx(carry_gates, carries.bit(i), {{ai, true}, {cin, true}});
        detail::add_mcx(carry_gates, carries.bit(i), {{bi, true}, {cin, true}});
    }
    f.gates = carry_gates;

    for (std::uint32_t i = 0; i < n; ++i) {
        if (auto ai = detail::reg_bit(a, i)) f.add(Gate::cnot(*ai, sum.bit(i)));
        if (auto bi = detail::reg_bit(b, i)) f.add(Gate::cnot(*bi, sum.bit(i)));
        if (i > 0) f.add(Gate::cnot(carries.bit(i - 1), sum.bit(i)));
    }
    f.add(Gate::cnot(carries.bit(n - 1), sum.bit(n)));

    for (auto it = carry_gates.rbegin(); it != carry_gates.rend(); ++it) f.add(*it);
    return f;
}

namespace detail {

// In-place target += a (Cuccaro MAJ/UMA ripple), carry-out XORed onto z.
// Every gate additionally carries `ctrl` so a single multiplier bit can gate
// the whole addition. cin is one ancilla, restored.
inline void controlled_inplace_add(std::vector<Gate>& gates, const RegRange& a,
                                   const RegRange& target, QubitId z, QubitId cin,
                                   const std::vector<Control>& ctrl)
{
    const std::uint32_t n = a.width;
    auto cx = [&](QubitId c, QubitId t) {
        Gate g = Gate::cnot(c, t);
        g.controls.insert(g.controls.end(), ctrl.begin(), ctrl.end());
        gates.push_back(std::move(g));
    };
    auto ccx = [&](QubitId c1, QubitId c2, QubitId t) {
        Gate g = Gate::toffoli(c1, c2, t);
        g.controls.insert(g.controls.end(), ctrl.begin(), ctrl.end());
        gates.push_back(std::move(g));
    };

    // MAJ ripple: after step i, a_i holds the carry out of bit i.
    for (std::uint32_t i = 0; i < n; ++i) {
        const QubitId prev = i == 0 ? cin : a.bit(i - 1);
        cx(a.bit(i), target.bit(i));
        cx(a.bit(i), prev);
        ccx(prev, target.bit(i), a.bit(i));
    }
    cx(a.bit(n - 1), z);
    // UMA ripple restores a and cin while writing the sum bits.
    for (std::uint32_t i = n; i-- > 0;) {
        const QubitId prev = i == 0 ? cin : a.bit(i - 1);
        ccx(prev, target.bit(i), a.bit(i));
        cx(a.bit(i), prev);
        cx(prev, target.bit(i));
    }
}

}  // namespace detail

// prod <- a * b by shift-and-add: for each multiplier bit b_j, an in-place
// addition of a into prod[j..] controlled on b_j. prod must be
// width(a) + width(b) qubits, initially |0>; carry is a single ancilla.
inline CircuitFragment multiplier_fragment(const RegRange& a, const RegRange& b,
                                           const RegRange& prod, const RegRange& carry)
{
    if (prod.width != a.width + b.width)
        throw Error("multiplier: product register must be width(a) + width(b)");
    if (carry.width < 1) throw Error("multiplier: needs one carry ancilla");
    if (a.overlaps(b) || a.overlaps(prod) || b.overlaps(prod) || carry.overlaps(a) ||
        carry.overlaps(b) || carry.overlaps(prod))
        throw Error("multiplier: registers overlap");

    CircuitFragment f;
    f.registers = {{"a", a}, {"b", b}, {"prod", prod}};
    f.ancillas = {{"mul_carry", carry}};
    for (std::uint32_t j = 0; j < b.width; ++j) {
        const RegRange slice{prod.bit(j), a.width};
        detail::controlled_inplace_add(f.gates, a, slice, prod.bit(j + a.width), carry.bit(0),
                                       {{b.bit(j), true}});
    }
    return f;
}

namespace detail {

// Borrow chain for a < b over n = max(width) bit positions:
//   lt_{i+1} = (~a_i & b_i) XOR ((a_i == b_i) & lt_i)
// chain.bit(i) holds lt_{i+1}; the final bit is the comparison result.
inline std::vector<Gate> less_than_chain(const RegRange& a, const RegRange& b,
                                         const RegRange& chain, std::uint32_t n)
{
    std::vector<Gate> gates;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto ai = reg_bit(a, i);
        const auto bi = reg_bit(b, i);
        add_mcx(gates, chain.bit(i), {{ai, false}, {bi, true}});
        if (i > 0) {
            const std::optional<QubitId> prev = chain.bit(i - 1);
            add_mcx(gates, chain.bit(i), {{ai, false}, {bi, false}, {prev, true}});
            add_mcx(gates, chain.bit(i), {{ai, true}, {bi, true}, {prev, true}});
        }
    }
    return gates;
}

}  // namespace detail

// Three-way comparison of a and b onto two flag qubits, both initially |0>:
// a > b writes (c_gt, c_lt) = (1, 0); a < b writes (0, 1); a = b leaves
// (0, 0). Runs the borrow chain twice (once per operand order) over the
// chain ancillas, uncomputing after each pass.
inline CircuitFragment comparator_fragment(const RegRange& a, const RegRange& b, QubitId c_gt,
                                           QubitId c_lt, const RegRange& chain)
{
    const std::uint32_t n = std::max(a.width, b.width);
    if (c_gt == c_lt) throw Error("comparator: flag qubits must differ");
    if (chain.width < n) throw Error("comparator: needs one chain ancilla per bit");
    if (a.overlaps(b) || a.overlaps(chain) || b.overlaps(chain) || a.contains(c_gt) ||
        a.contains(c_lt) || b.contains(c_gt) || b.contains(c_lt) || chain.contains(c_gt) ||
        chain.contains(c_lt))
        throw Error("comparator: registers overlap");

    CircuitFragment f;
    f.registers = {{"a", a}, {"b", b}};
    f.ancillas = {{"cmp_chain", {chain.first, n}}};

    const std::vector<Gate> lt = detail::less_than_chain(a, b, chain, n);
    f.gates = lt;
    f.add(Gate::cnot(chain.bit(n - 1), c_lt));
    for (auto it = lt.rbegin(); it != lt.rend(); ++it) f.add(*it);

    const std::vector<Gate> gt = detail::less_than_chain(b, a, chain, n);
    for (const Gate& g : gt) f.add(g);
    f.add(Gate::cnot(chain.bit(n - 1), c_gt));
    for (auto it = gt.rbegin(); it != gt.rend(); ++it) f.add(*it);
    return f;
}

}  // namespace qse
