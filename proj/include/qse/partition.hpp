#pragma once

// Extraction of per-branch test-case subsets from a compiled circuit: run
// the simulation, decode every surviving basis term through the flag
// dictionary, and collect the variable assignments per branch. Also the
// joint measurement histogram and structural partition checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qse/statevector.hpp"
#include "qse/synth.hpp"

namespace qse {

struct TestCase {
    std::vector<std::uint64_t> values;  // one per variable, declaration order

    friend bool operator==(const TestCase& a, const TestCase& b) { return a.values == b.values; }
    friend bool operator<(const TestCase& a, const TestCase& b) { return a.values < b.values; }
};

struct BranchSubset {
    std::string branch_id;
    std::vector<std::string> patterns;  // flag pattern arms ('|'-alternatives)
    std::vector<TestCase> cases;        // sorted lexicographically
};

struct Partition {
    std::vector<std::string> var_names;
    std::vector<std::uint32_t> var_widths;
    std::uint32_t s_width = 0;
    std::vector<BranchSubset> branches;

    const BranchSubset* find(const std::string& id) const
    {
        for (const auto& b : branches)
            if (b.branch_id == id) return &b;
        return nullptr;
    }

    std::size_t total_cases() const
    {
        std::size_t n = 0;
        for (const auto& b : branches) n += b.cases.size();
        return n;
    }
};

inline std::string to_string(const TestCase& tc, const std::vector<std::string>& names)
{
    std::string s = "(";
    for (std::size_t i = 0; i < tc.values.size(); ++i) {
        if (i) s += ",";
        s += names[i] + "=" + std::to_string(tc.values[i]);
    }
    return s + ")";
}

namespace detail {

inline std::uint64_t extract_bits(std::uint64_t basis, const RegRange& r)
{
    return (basis >> r.first) & ((std::uint64_t(1) << r.width) - 1);
}

}  // namespace detail

// Amplitudes below this magnitude are numerical dust, not basis terms.
inline constexpr double kAmplitudeThreshold = 1e-9;

// Simulates prep + body from |0...0> and decodes the final state into the
// branch partition. Throws when a surviving term has dirty scratch, a
// non-uniform amplitude, or flags matching no dictionary pattern — each of
// which signals a synthesis bug, not a property of the program.
inline Partition run_and_extract(const QseCircuit& circuit)
{
    const VariableLayout& L = circuit.layout;
    Statevector state(std::max<std::uint32_t>(L.total_qubits, 1), std::max(L.ceiling, 1u));
    state.apply(circuit.prep);
    state.apply(circuit.body);

    Partition part;
    for (const auto& d : L.decls) {
        part.var_names.push_back(d.name);
        part.var_widths.push_back(d.width);
    }
    part.s_width = L.s_width;
    for (const auto& bp : circuit.dictionary.branches) {
        BranchSubset bs;
        bs.branch_id = bp.branch_id;
        for (const auto& arm : bp.arms) bs.patterns.push_back(arm.text);
        part.branches.push_back(std::move(bs));
    }

    const double uniform = std::pow(0.5, 0.5 * L.s_width);
    const RegRange flag_range{L.flag_base, L.flag_width};
    std::uint64_t present = 0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        const double mag = std::abs(state.amplitude(i));
        if (mag <= kAmplitudeThreshold) continue;
        ++present;
        if (L.scratch.width && detail::extract_bits(i, L.scratch) != 0)
            throw Error("synthesis bug: scratch qubits not restored on a surviving basis term");
        if (std::abs(mag - uniform) > 1e-9)
            throw Error("synthesis bug: non-uniform amplitude on a surviving basis term");
        const std::uint64_t flags = L.flag_width ? detail::extract_bits(i, flag_range) : 0;
        const int b = circuit.dictionary.match(flags);
        if (b < 0)
            throw Error("synthesis bug: flag state " +
                        pattern_text(~std::uint64_t(0), flags, L.flag_width) +
                        " matches no branch pattern");
        TestCase tc;
        for (const auto& r : L.var_ranges) tc.values.push_back(detail::extract_bits(i, r));
        part.branches[static_cast<std::size_t>(b)].cases.push_back(std::move(tc));
    }
    if (present != (std::uint64_t(1) << L.s_width))
        throw Error("synthesis bug: expected " + std::to_string(std::uint64_t(1) << L.s_width) +
                    " surviving basis terms, found " + std::to_string(present));

    for (auto& b : part.branches) std::sort(b.cases.begin(), b.cases.end());
    return part;
}

// Joint measurement order: flag qubits (most significant first), then each
// variable in declaration order (its own most significant bit first).
inline std::vector<QubitId> measurement_qubits(const VariableLayout& L)
{
    std::vector<QubitId> qs;
    for (std::uint32_t i = L.flag_width; i-- > 0;) qs.push_back(L.flag_base + i);
    for (const auto& r : L.var_ranges)
        for (std::uint32_t b = r.width; b-- > 0;) qs.push_back(r.bit(b));
    return qs;
}

// Samples a joint measurement of the flag and variable qubits.
// Deterministic per seed; support equals the set of surviving basis terms.
inline std::map<std::string, std::uint64_t> sample_histogram(const QseCircuit& circuit,
                                                             std::uint64_t shots,
                                                             std::uint64_t seed)
{
    const VariableLayout& L = circuit.layout;
    Statevector state(std::max<std::uint32_t>(L.total_qubits, 1), std::max(L.ceiling, 1u));
    state.apply(circuit.prep);
    state.apply(circuit.body);
    return measure_counts(state, measurement_qubits(L), shots, seed);
}

// ---------------------------------------------------------------------------
// Structural validation

struct PartitionReport {
    bool pass = true;
    std::vector<std::string> issues;

    void fail(std::string msg)
    {
        pass = false;
        issues.push_back(std::move(msg));
    }
};

// Checks disjointness, exhaustiveness (exactly 2^n cases in the union), and
// per-variable width bounds. Failures are report content, not errors.
inline PartitionReport verify_partition(const Partition& p, const VariableLayout& layout)
{
    PartitionReport rep;
    if (p.var_names.size() != layout.decls.size())
        rep.fail("variable list does not match the layout");

    std::map<std::vector<std::uint64_t>, std::string> seen;
    std::uint64_t total = 0;
    for (const auto& b : p.branches) {
        for (const auto& tc : b.cases) {
            ++total;
            if (tc.values.size() != p.var_widths.size()) {
                rep.fail("branch " + b.branch_id + ": test case arity mismatch");
                continue;
            }
            for (std::size_t v = 0; v < tc.values.size(); ++v)
                if (p.var_widths[v] < 64 &&
                    tc.values[v] >= (std::uint64_t(1) << p.var_widths[v]))
                    rep.fail("branch " + b.branch_id + ": value " +
                             std::to_string(tc.values[v]) + " exceeds width of " +
                             p.var_names[v]);
            auto [it, fresh] = seen.emplace(tc.values, b.branch_id);
            if (!fresh)
                rep.fail("test case " + to_string(tc, p.var_names) + " appears in both " +
                         it->second + " and " + b.branch_id);
        }
    }
    const std::uint64_t space = std::uint64_t(1) << p.s_width;
    if (total != space)
        rep.fail("union holds " + std::to_string(total) + " cases, expected " +
                 std::to_string(space));
    return rep;
}

// ---------------------------------------------------------------------------
// Partition comparison (quantum vs classical oracle)

struct CompareReport {
    bool pass = true;
    std::vector<std::string> counterexamples;  // capped at 10
    std::string verdict() const { return pass ? "PASS" : "FAIL"; }
};

inline CompareReport compare_partitions(const Partition& a, const Partition& b)
{
    std::vector<std::string> ids_a, ids_b;
    for (const auto& x : a.branches) ids_a.push_back(x.branch_id);
    for (const auto& x : b.branches) ids_b.push_back(x.branch_id);
    {
        auto sa = ids_a, sb = ids_b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) throw Error("compare_partitions: branch-id sets differ");
    }

    CompareReport rep;
    auto note = [&](const std::string& s) {
        rep.pass = false;
        if (rep.counterexamples.size() < 10) rep.counterexamples.push_back(s);
    };
    for (const auto& ba : a.branches) {
        const BranchSubset* bb = b.find(ba.branch_id);
        std::vector<TestCase> only_a, only_b;
        std::set_difference(ba.cases.begin(), ba.cases.end(), bb->cases.begin(), bb->cases.end(),
                            std::back_inserter(only_a));
        std::set_difference(bb->cases.begin(), bb->cases.end(), ba.cases.begin(), ba.cases.end(),
                            std::back_inserter(only_b));
        for (const auto& tc : only_a)
            note("branch " + ba.branch_id + ": " + to_string(tc, a.var_names) +
                 " present only on the left");
        for (const auto& tc : only_b)
            note("branch " + ba.branch_id + ": " + to_string(tc, a.var_names) +
                 " present only on the right");
    }
    return rep;
}

}  // namespace qse
