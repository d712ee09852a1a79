#pragma once

// Benchmark harness: the desk-scale corpus manifest, the path/division
// comparison table, and the coverage-versus-width sweep.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qse/oracle.hpp"
#include "qse/parser.hpp"
#include "qse/partition.hpp"
#include "qse/synth.hpp"

namespace qse {

struct CorpusProgram {
    std::string name;
    std::string dsl_path;
    std::string dsl_source;
    std::uint32_t expected_divisions = 0;
    std::string notes;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Manifest: one program per line, "<name> <dsl-path> <expected-divisions>";
// '#' starts a comment. Paths are resolved relative to the manifest file.
inline std::vector<CorpusProgram> load_manifest(const std::string& manifest_path)
{
    std::ifstream in(manifest_path);
    if (!in) throw Error("cannot open manifest '" + manifest_path + "'");
    std::string dir;
    if (auto slash = manifest_path.find_last_of('/'); slash != std::string::npos)
        dir = manifest_path.substr(0, slash + 1);

    std::vector<CorpusProgram> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        CorpusProgram p;
        if (!(ls >> p.name >> p.dsl_path >> p.expected_divisions)) continue;
        p.dsl_path = dir + p.dsl_path;
        p.dsl_source = read_file(p.dsl_path);
        out.push_back(std::move(p));
    }
    if (out.empty()) throw Error("manifest '" + manifest_path + "' lists no programs");
    return out;
}

// One row of the complexity comparison: classical symbolic execution
// explores satisfiable paths (a constraint solver prunes infeasible ones),
// while the quantum side materializes one subspace division per distinct
// condition. The structural leaf count is reported alongside.
struct DivisionRow {
    std::string name;
    std::size_t divisions = 0;         // distinct materialized conditions
    std::size_t paths_structural = 0;  // leaves of the branch tree
    std::size_t paths_feasible = 0;    // branches with a non-empty subset
    std::uint32_t expected_divisions = 0;
};

inline std::vector<DivisionRow> division_count_report(const std::vector<CorpusProgram>& corpus)
{
    std::vector<DivisionRow> rows;
    for (const auto& p : corpus) {
        BranchTree tree = parse_program(p.dsl_source);
        DivisionRow row;
        row.name = p.name;
        row.divisions = count_conditions(tree);
        row.paths_structural = collect_paths(tree).size();
        Partition oracle = brute_force_partition(tree);
        for (const auto& b : oracle.branches)
            if (!b.cases.empty()) ++row.paths_feasible;
        row.expected_divisions = p.expected_divisions;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string format_division_table(const std::vector<DivisionRow>& rows)
{
    std::ostringstream os;
    os << "program        paths  divisions  (structural paths, expected divisions)\n";
    for (const auto& r : rows) {
        os << r.name;
        for (std::size_t i = r.name.size(); i < 15; ++i) os << ' ';
        os << r.paths_feasible << "      " << r.divisions << "          (" << r.paths_structural
           << ", " << r.expected_divisions << (r.divisions == r.expected_divisions ? ", ok" : ", MISMATCH")
           << ")\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Coverage sweep

enum class SweepMode {
    Auto,     // quantum when the layout fits the simulator ceiling, else oracle
    Oracle,
    Quantum,
};

struct SweepResult {
    std::vector<double> coverage;              // coverage[w-1] for width w
    std::optional<std::uint32_t> minimal_full; // smallest width reaching 1.0
    std::vector<bool> used_quantum;            // per width
};

inline BranchTree with_uniform_width(const BranchTree& tree, std::uint32_t w)
{
    BranchTree t = tree;
    for (auto& d : t.decls) d.width = w;
    return t;
}

// Branch coverage (fraction of leaves with a non-empty subset) for every
// uniform per-variable width 1..max_width, plus the smallest width covering
// every branch. Coverage is monotone: growing a register keeps every
// existing assignment available.
inline SweepResult coverage_sweep(const BranchTree& tree, std::uint32_t max_width,
                                  SweepMode mode = SweepMode::Auto,
                                  std::uint32_t sim_ceiling = kDefaultQubitCeiling,
                                  std::uint32_t oracle_ceiling = kOracleBitCeiling)
{
    if (max_width == 0) throw Error("coverage_sweep: max_width must be positive");
    const std::size_t leaves = leaf_count(tree);
    SweepResult res;
    for (std::uint32_t w = 1; w <= max_width; ++w) {
        BranchTree tw = with_uniform_width(tree, w);
        std::uint32_t n = 0;
        for (const auto& d : tw.decls) n += d.width;
        if (n > oracle_ceiling)
            throw Error("coverage_sweep: width " + std::to_string(w) +
                        " exceeds the oracle ceiling");

        bool quantum = mode == SweepMode::Quantum;
        Partition part;
        if (mode != SweepMode::Oracle) {
            try {
                VariableLayout L = plan_layout(tw, sim_ceiling);
                part = run_and_extract(compile_qse(tw, L));
                quantum = true;
            } catch (const Error&) {
                if (mode == SweepMode::Quantum) throw;
                quantum = false;
            }
        }
        if (!quantum) part = brute_force_partition(tw, oracle_ceiling);

        std::size_t covered = 0;
        for (const auto& b : part.branches)
            if (!b.cases.empty()) ++covered;
        const double frac = static_cast<double>(covered) / static_cast<double>(leaves);
        res.coverage.push_back(frac);
        res.used_quantum.push_back(quantum);
        if (!res.minimal_full && covered == leaves) res.minimal_full = w;
    }
    return res;
}

}  // namespace qse
