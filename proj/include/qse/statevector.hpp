#pragma once

// Dense statevector simulator. Little-endian basis indexing throughout:
// qubit 0 is the least significant bit of the amplitude index. Controlled
// gates are applied by enumerating only the indices whose control bits
// match, via masked-counter iteration.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qse/circuit.hpp"

namespace qse {

inline constexpr std::uint32_t kDefaultQubitCeiling = 26;

class Statevector {
public:
    explicit Statevector(std::uint32_t num_qubits,
                         std::uint32_t ceiling = kDefaultQubitCeiling)
        : num_qubits_(num_qubits)
    {
        if (num_qubits == 0) throw Error("statevector needs at least one qubit");
        if (num_qubits > ceiling)
            throw Error("allocation of " + std::to_string(num_qubits) +
                        " qubits exceeds the ceiling of " + std::to_string(ceiling));
        amps_.assign(std::uint64_t(1) << num_qubits, {0.0, 0.0});
        amps_[0] = {1.0, 0.0};
    }

    std::uint32_t num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }

    const std::complex<double>& amplitude(std::uint64_t basis) const { return amps_[basis]; }

    // Collapses to a single computational-basis state (test setup helper).
    void set_basis(std::uint64_t basis)
    {
        std::fill(amps_.begin(), amps_.end(), std::complex<double>{0.0, 0.0});
        amps_.at(basis) = {1.0, 0.0};
    }

    double norm_sq() const
    {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void apply(const Gate& g)
    {
        validate(g);
        if (g.kind == GateKind::I) return;

        std::uint64_t ctrl_mask = 0, ctrl_val = 0;
        for (const Control& c : g.controls) {
            ctrl_mask |= std::uint64_t(1) << c.qubit;
            if (c.value) ctrl_val |= std::uint64_t(1) << c.qubit;
        }
        const std::uint64_t t_mask = std::uint64_t(1) << g.target;
        const std::uint64_t free_mask = (dim() - 1) & ~ctrl_mask & ~t_mask;

        if (g.kind == GateKind::X) {
            std::uint64_t sub = 0;
            do {
                const std::uint64_t i0 = sub | ctrl_val;
                std::swap(amps_[i0], amps_[i0 | t_mask]);
                sub = (sub - free_mask) & free_mask;
            } while (sub != 0);
        } else {  // H
            constexpr double inv_sqrt2 = 0.70710678118654752440;
            std::uint64_t sub = 0;
            do {
                const std::uint64_t i0 = sub | ctrl_val;
                const std::complex<double> a = amps_[i0];
                const std::complex<double> b = amps_[i0 | t_mask];
                amps_[i0] = (a + b) * inv_sqrt2;
                amps_[i0 | t_mask] = (a - b) * inv_sqrt2;
                sub = (sub - free_mask) & free_mask;
            } while (sub != 0);
        }
    }

    void apply(const CircuitFragment& frag)
    {
        for (const Gate& g : frag.gates) apply(g);
    }

private:
    void validate(const Gate& g) const
    {
        if (g.target >= num_qubits_)
            throw Error("gate target " + std::to_string(g.target) + " out of range");
        std::uint64_t seen = std::uint64_t(1) << g.target;
        for (const Control& c : g.controls) {
            if (c.qubit >= num_qubits_)
                throw Error("gate control " + std::to_string(c.qubit) + " out of range");
            const std::uint64_t bit = std::uint64_t(1) << c.qubit;
            if (seen & bit)
                throw Error("gate target/control overlap on qubit " + std::to_string(c.qubit));
            seen |= bit;
        }
    }

    std::uint32_t num_qubits_;
    std::vector<std::complex<double>> amps_;
};

// All-zeros initial state |0...0>.
inline Statevector new_state(std::uint32_t num_qubits,
                             std::uint32_t ceiling = kDefaultQubitCeiling)
{
    return Statevector(num_qubits, ceiling);
}

inline void apply_fragment(Statevector& state, const CircuitFragment& frag) { state.apply(frag); }

namespace detail {

// Packs the listed qubits of a basis index into an outcome value whose bit
// (k-1-j) holds qubit qubits[j]; qubits.front() is thus the most significant
// character once rendered as a bitstring.
inline std::uint64_t pack_outcome(std::uint64_t basis, const std::vector<QubitId>& qubits)
{
    std::uint64_t v = 0;
    for (QubitId q : qubits) v = (v << 1) | ((basis >> q) & 1);
    return v;
}

inline std::string outcome_to_string(std::uint64_t v, std::size_t k)
{
    std::string s(k, '0');
    for (std::size_t i = 0; i < k; ++i)
        if ((v >> (k - 1 - i)) & 1) s[i] = '1';
    return s;
}

}  // namespace detail

// Exact marginal distribution of the listed qubits, keyed by bitstring with
// qubits.front() leftmost.
inline std::map<std::string, double> marginal_probabilities(const Statevector& state,
                                                            const std::vector<QubitId>& qubits)
{
    if (qubits.empty()) throw Error("marginal over an empty qubit list");
    std::map<std::uint64_t, double> acc;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state.amplitude(i));
        if (p > 0.0) acc[detail::pack_outcome(i, qubits)] += p;
    }
    std::map<std::string, double> out;
    for (const auto& [v, p] : acc) out[detail::outcome_to_string(v, qubits.size())] = p;
    return out;
}

// Samples `shots` measurements of the listed qubits from the exact marginal.
// Deterministic for a fixed seed. Counts sum to shots.
inline std::map<std::string, std::uint64_t> measure_counts(const Statevector& state,
                                                           const std::vector<QubitId>& qubits,
                                                           std::uint64_t shots,
                                                           std::uint64_t seed)
{
    if (qubits.empty()) throw Error("measurement over an empty qubit list");
    if (shots == 0) throw Error("shots must be positive");
    {
        std::uint64_t seen = 0;
        for (QubitId q : qubits) {
            if (q >= state.num_qubits())
                throw Error("measured qubit " + std::to_string(q) + " out of range");
            const std::uint64_t bit = std::uint64_t(1) << q;
            if (seen & bit) throw Error("duplicate qubit in measurement list");
            seen |= bit;
        }
    }

    std::map<std::uint64_t, double> marg;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state.amplitude(i));
        if (p > 0.0) marg[detail::pack_outcome(i, qubits)] += p;
    }

    std::vector<std::uint64_t> values;
    std::vector<double> cdf;
    values.reserve(marg.size());
    cdf.reserve(marg.size());
    double run = 0.0;
    for (const auto& [v, p] : marg) {
        run += p;
        values.push_back(v);
        cdf.push_back(run);
    }

    // Explicit 53-bit uniform doubles; std::uniform_real_distribution is not
    // reproducible across standard libraries.
    std::mt19937_64 rng(seed);
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * run;
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        ++counts[values[lo]];
    }

    std::map<std::string, std::uint64_t> out;
    for (const auto& [v, c] : counts) out[detail::outcome_to_string(v, qubits.size())] = c;
    return out;
}

}  // namespace qse
