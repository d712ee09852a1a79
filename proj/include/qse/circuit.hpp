#pragma once

// Reversible-circuit building blocks: gates with polarized controls, named
// qubit ranges, and composable fragments. A fragment is an ordered gate list
// plus register/ancilla metadata for the netlist dump; every ancilla a
// fragment claims is returned to |0> on all computational-basis inputs.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qse/ast.hpp"

namespace qse {

using QubitId = std::uint32_t;

struct RegRange {
    QubitId first = 0;
    std::uint32_t width = 0;

    QubitId bit(std::uint32_t i) const { return first + i; }
    QubitId end() const { return first + width; }
    bool contains(QubitId q) const { return q >= first && q < end(); }
    bool overlaps(const RegRange& o) const { return first < o.end() && o.first < end(); }
};

enum class GateKind { H, X, I };

struct Control {
    QubitId qubit = 0;
    bool value = true;  // false = 0-control (open circle)

    friend bool operator==(const Control& a, const Control& b)
    {
        return a.qubit == b.qubit && a.value == b.value;
    }
};

struct Gate {
    GateKind kind = GateKind::X;
    QubitId target = 0;
    std::vector<Control> controls;

    static Gate h(QubitId t) { return Gate{GateKind::H, t, {}}; }
    static Gate x(QubitId t) { return Gate{GateKind::X, t, {}}; }
    static Gate x(QubitId t, std::vector<Control> ctrls)
    {
        return Gate{GateKind::X, t, std::move(ctrls)};
    }
    static Gate cnot(QubitId control, QubitId t) { return Gate{GateKind::X, t, {{control, true}}}; }
    static Gate toffoli(QubitId c1, QubitId c2, QubitId t)
    {
        return Gate{GateKind::X, t, {{c1, true}, {c2, true}}};
    }
    static Gate identity(QubitId t) { return Gate{GateKind::I, t, {}}; }

    // Display name per control count: X, CNOT, Toffoli, MCX.
    std::string display_kind() const
    {
        if (kind == GateKind::H) return "H";
        if (kind == GateKind::I) return "I";
        if (controls.empty()) return "X";
        if (controls.size() == 1) return "CNOT";
        if (controls.size() == 2) return "Toffoli";
        return "MCX";
    }

    friend bool operator==(const Gate& a, const Gate& b)
    {
        return a.kind == b.kind && a.target == b.target && a.controls == b.controls;
    }
};

struct NamedRange {
    std::string name;
    RegRange range;
};

struct CircuitFragment {
    std::vector<Gate> gates;
    std::vector<NamedRange> registers;
    std::vector<NamedRange> ancillas;  // scratch restored to |0> by the fragment

    void add(Gate g) { gates.push_back(std::move(g)); }

    void append(const CircuitFragment& other)
    {
        gates.insert(gates.end(), other.gates.begin(), other.gates.end());
        registers.insert(registers.end(), other.registers.begin(), other.registers.end());
        ancillas.insert(ancillas.end(), other.ancillas.begin(), other.ancillas.end());
    }

    // Reversed gate order; H, X and controlled-X are self-inverse, so this is
    // the exact inverse of the fragment.
    CircuitFragment inverted() const
    {
        CircuitFragment inv;
        inv.gates.assign(gates.rbegin(), gates.rend());
        return inv;
    }

    bool touches(QubitId q) const
    {
        for (const Gate& g : gates) {
            if (g.target == q) return true;
            for (const Control& c : g.controls)
                if (c.qubit == q) return true;
        }
        return false;
    }

    QubitId max_qubit() const
    {
        QubitId m = 0;
        for (const Gate& g : gates) {
            m = std::max(m, g.target);
            for (const Control& c : g.controls) m = std::max(m, c.qubit);
        }
        return m;
    }
};

// Applies `frag` exactly on basis states where every control matches its
// polarity, identity otherwise. Control qubits must not appear anywhere in
// the fragment.
inline CircuitFragment controlled(const CircuitFragment& frag, const std::vector<Control>& ctrls)
{
    for (const Control& c : ctrls)
        if (frag.touches(c.qubit))
            throw Error("controlled: control qubit " + std::to_string(c.qubit) +
                        " overlaps the fragment");
    CircuitFragment out = frag;
    for (Gate& g : out.gates)
        g.controls.insert(g.controls.end(), ctrls.begin(), ctrls.end());
    return out;
}

// Text netlist, one gate per line:
//   GATE <kind> targets=[t] controls=[(q,+),(q,-),...]
// preceded by register and ancilla-budget comments.
inline void write_netlist(std::ostream& os, const CircuitFragment& frag)
{
    for (const auto& r : frag.registers)
        os << "# register " << r.name << " first=" << r.range.first << " width=" << r.range.width
           << "\n";
    for (const auto& a : frag.ancillas)
        os << "# ancilla " << a.name << " first=" << a.range.first << " width=" << a.range.width
           << "\n";
    for (const Gate& g : frag.gates) {
        os << "GATE " << g.display_kind() << " targets=[" << g.target << "] controls=[";
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
            if (i) os << ",";
            os << "(" << g.controls[i].qubit << "," << (g.controls[i].value ? "+" : "-") << ")";
        }
        os << "]\n";
    }
}

}  // namespace qse
