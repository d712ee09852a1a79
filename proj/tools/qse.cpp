// Command-line front end: compile, run, sample, verify, sweep and bench
// subcommands over condition-language programs.
//
// Exit codes: 0 success / verification PASS, 1 verification FAIL,
// 2 usage, file or parse errors.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qse/qse.hpp"
#include "qse/report.hpp"

namespace {

qse::BranchTree load_tree(const std::string& path)
{
    return qse::parse_program(qse::read_file(path));
}

std::ostream& open_out(std::ofstream& file, const std::string& path)
{
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw qse::Error("cannot write '" + path + "'");
    return file;
}

int cmd_compile(const std::string& file, const std::string& netlist_out,
                const std::string& dict_out, std::uint32_t ceiling)
{
    qse::BranchTree tree = load_tree(file);
    qse::VariableLayout layout = qse::plan_layout(tree, ceiling);
    qse::QseCircuit circuit = qse::compile_qse(tree, layout);

    std::ofstream nf, df;
    std::ostream& nos = open_out(nf, netlist_out);
    nos << "# netlist: " << file << " (" << layout.total_qubits << " qubits)\n";
    qse::write_netlist(nos, circuit.full_fragment());
    std::ostream& dos = open_out(df, dict_out);
    dos << "# dictionary: " << file << "\n";
    qse::write_dictionary(dos, circuit.dictionary);
    return 0;
}

int cmd_run(const std::string& file, bool json, std::uint32_t ceiling)
{
    qse::BranchTree tree = load_tree(file);
    qse::QseCircuit circuit = qse::compile_qse(tree, qse::plan_layout(tree, ceiling));
    qse::Partition part = qse::run_and_extract(circuit);
    if (json)
        std::cout << qse::partition_to_json(part).dump(2) << "\n";
    else
        qse::write_partition_text(std::cout, part);
    return 0;
}

int cmd_sample(const std::string& file, std::uint64_t shots, std::uint64_t seed,
               const std::string& out, std::uint32_t ceiling)
{
    qse::BranchTree tree = load_tree(file);
    qse::QseCircuit circuit = qse::compile_qse(tree, qse::plan_layout(tree, ceiling));
    auto histogram = qse::sample_histogram(circuit, shots, seed);
    std::ofstream f;
    qse::write_histogram_csv(open_out(f, out), histogram);
    return 0;
}

int cmd_verify(const std::string& file, std::uint32_t ceiling)
{
    qse::BranchTree tree = load_tree(file);
    qse::QseCircuit circuit = qse::compile_qse(tree, qse::plan_layout(tree, ceiling));
    qse::Partition quantum = qse::run_and_extract(circuit);
    qse::Partition classical = qse::brute_force_partition(tree);
    qse::CompareReport rep = qse::compare_partitions(quantum, classical);
    std::cout << rep.verdict() << "\n";
    for (const auto& c : rep.counterexamples) std::cout << "  " << c << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_sweep(const std::string& file, std::uint32_t max_width, const std::string& mode_name,
              std::uint32_t ceiling)
{
    qse::SweepMode mode = qse::SweepMode::Auto;
    if (mode_name == "oracle")
        mode = qse::SweepMode::Oracle;
    else if (mode_name == "quantum")
        mode = qse::SweepMode::Quantum;
    else if (mode_name != "auto")
        throw qse::Error("unknown sweep mode '" + mode_name + "'");

    qse::BranchTree tree = load_tree(file);
    qse::SweepResult res = qse::coverage_sweep(tree, max_width, mode, ceiling);
    std::cout << "width  coverage  backend\n";
    for (std::size_t i = 0; i < res.coverage.size(); ++i)
        std::cout << (i + 1) << "      " << res.coverage[i] << "     "
                  << (res.used_quantum[i] ? "quantum" : "oracle") << "\n";
    if (res.minimal_full)
        std::cout << "minimal full-coverage width: " << *res.minimal_full << "\n";
    else
        std::cout << "no width up to " << max_width << " covers every branch\n";
    return 0;
}

int cmd_bench(const std::string& manifest)
{
    auto corpus = qse::load_manifest(manifest);
    auto rows = qse::division_count_report(corpus);
    std::cout << qse::format_division_table(rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"quantum symbolic execution: branch-condition circuits and test-case partitions"};
    app.require_subcommand(1);
    std::uint32_t ceiling = qse::kDefaultQubitCeiling;
    app.add_option("--qubit-ceiling", ceiling, "simulator qubit ceiling")->capture_default_str();

    std::string file, netlist_out, dict_out = "-", out;
    bool json = false;
    std::uint64_t shots = 8192, seed = 1;
    std::uint32_t max_width = 6;
    std::string mode = "auto";
    std::string manifest = "corpus/manifest.txt";

    auto* compile = app.add_subcommand("compile", "emit the circuit netlist and flag dictionary");
    compile->add_option("file", file, "program file")->required();
    compile->add_option("--netlist", netlist_out, "netlist output file (default stdout)");
    compile->add_option("--dictionary", dict_out, "dictionary output file (default stdout)");

    auto* run = app.add_subcommand("run", "simulate and print the branch partition");
    run->add_option("file", file, "program file")->required();
    run->add_flag("--json", json, "emit JSON instead of text");

    auto* sample = app.add_subcommand("sample", "sampled measurement histogram as CSV");
    sample->add_option("file", file, "program file")->required();
    sample->add_option("--shots", shots, "number of measurements")->capture_default_str();
    sample->add_option("--seed", seed, "sampling seed")->capture_default_str();
    sample->add_option("-o,--output", out, "CSV output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "compare the quantum partition to brute force");
    verify->add_option("file", file, "program file")->required();

    auto* sweep = app.add_subcommand("sweep", "branch coverage per uniform variable width");
    sweep->add_option("file", file, "program file")->required();
    sweep->add_option("--max-width", max_width, "largest width to test")->capture_default_str();
    sweep->add_option("--mode", mode, "auto|oracle|quantum")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "path/division table over the benchmark corpus");
    bench->add_option("--manifest", manifest, "corpus manifest")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (compile->parsed()) return cmd_compile(file, netlist_out, dict_out, ceiling);
        if (run->parsed()) return cmd_run(file, json, ceiling);
        if (sample->parsed()) return cmd_sample(file, shots, seed, out, ceiling);
        if (verify->parsed()) return cmd_verify(file, ceiling);
        if (sweep->parsed()) return cmd_sweep(file, max_width, mode, ceiling);
        if (bench->parsed()) return cmd_bench(manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
