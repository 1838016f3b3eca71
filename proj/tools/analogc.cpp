// analogc: compile, verify and inspect analog simulation programs.
//
// Exit codes: 0 ok, 1 verification above threshold, 2 no solution,
// 3 timeout, 4 too many sites for the dense verifier, 5 bad input.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "analogc/conflict.hpp"
#include "analogc/pipeline.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace analogc;

namespace {

enum Exit { kOk = 0, kVerifyFail = 1, kNoSolution = 2, kTimeout = 3, kTooLarge = 4, kBadInput = 5 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Program {
    QuantumSystem sys;
    std::uint32_t steps = 0;  // largest steps clause after overrides, 0 when time-independent
};

Program load_program(const std::string& path, std::optional<std::uint32_t> disc) {
    std::string text = read_file(path);
    hml::ParseOptions po;
    po.steps_override = disc;
    try {
        return Program{hml::parse_system(text, po), hml::max_steps(text, po)};
    } catch (const hml::SourceError& e) {
        throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.message());
    }
}

AAIS load_machine(const std::string& path) { return build_machine(parse_machine_config(read_file(path))); }

std::optional<Layout> parse_layout(const std::string& spec, std::size_t n) {
    if (spec.empty()) return std::nullopt;
    if (spec == "identity") return Layout::identity(n);
    Layout l;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            l.mapping.push_back(static_cast<SiteId>(std::stoul(item)));
        } catch (const std::exception&) {
            throw InputError("--layout: '" + item + "' is not a site index");
        }
    }
    if (l.mapping.size() != n) throw InputError("--layout: expected " + std::to_string(n) + " sites");
    return l;
}

std::string join_layout(const std::vector<SiteId>& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
    return s;
}

int exit_for(CompileStatus s) {
    switch (s) {
        case CompileStatus::Success: return kOk;
        case CompileStatus::NoSolution: return kNoSolution;
        case CompileStatus::Timeout: return kTimeout;
    }
    return kBadInput;
}

struct CompileArgs {
    std::string system, machine, out, layout;
    std::uint32_t trotter = 4;
    std::optional<std::uint32_t> disc;
    std::optional<double> tolerance;
    double delta = 1e-2;
    double timeout = 600.0;
    std::uint64_t seed = 0;
    std::uint64_t max_nodes = 1'000'000;
};

int cmd_compile(const CompileArgs& a) {
    Program prog = load_program(a.system, a.disc);
    AAIS aais = load_machine(a.machine);
    CompileOptions opts;
    opts.trotter = a.trotter;
    opts.discretization = std::max<std::uint32_t>(prog.steps, 1);
    opts.tolerance = a.tolerance;
    opts.delta = a.delta;
    opts.timeout_s = a.timeout;
    opts.seed = a.seed;
    opts.max_nodes = a.max_nodes;
    opts.layout = parse_layout(a.layout, prog.sys.num_sites());

    auto t0 = std::chrono::steady_clock::now();
    CompileResult res = compile(prog.sys, aais, opts);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (res.status != CompileStatus::Success) {
        std::cerr << "analogc: " << status_name(res.status) << ": " << res.message << "\n";
        return exit_for(res.status);
    }
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw InputError("cannot write " + a.out);
    out << emit_json(res.lines, res.metadata);
    std::printf("status      %s\n", status_name(res.status));
    std::printf("layout      %s\n", join_layout(res.layout.mapping).c_str());
    std::printf("residual    %.6g (tolerance %.6g)\n", res.solution.e, res.epsilon);
    std::printf("blocks      %zu\n", res.blocks.blocks.size());
    std::printf("duration_s  %.6g\n", res.lines.total_duration_s);
    std::printf("compile_ms  %.1f\n", ms);
    return kOk;
}

struct VerifyArgs {
    std::string system, machine, schedule;
    double threshold = 0.05;
    std::optional<std::uint32_t> disc;
};

int cmd_verify(const VerifyArgs& a) {
    PulseScheduleDoc doc = parse_schedule_document(read_file(a.schedule));
    std::optional<std::uint32_t> disc = a.disc;
    // Rebuild the program at the discretization it was compiled with.
    if (!disc && doc.metadata.discretization > 1) disc = doc.metadata.discretization;
    Program prog = load_program(a.system, disc);
    AAIS aais = load_machine(a.machine);
    if (doc.schedule.aais != aais.name) throw InputError("schedule targets '" + doc.schedule.aais + "' but the machine is '" + aais.name + "'");
    VerifyReport r = verify(prog.sys, aais, doc);
    std::cout << format_report(r);
    bool pass = r.phase_distance <= a.threshold;
    std::printf("threshold         %.6g\nresult            %s\n", a.threshold, pass ? "PASS" : "FAIL");
    return pass ? kOk : kVerifyFail;
}

int cmd_inspect(const std::string& system, const std::string& machine, const std::string& layout_spec, std::optional<std::uint32_t> disc) {
    Program prog = load_program(system, disc);
    AAIS aais = load_machine(machine);
    std::optional<Layout> layout = parse_layout(layout_spec, prog.sys.num_sites());
    if (!layout) {
        LayoutProposer proposer(prog.sys, aais);
        LayoutOutcome first = proposer.next();
        if (first.status != SearchStatus::Found) {
            std::cerr << "analogc: no site layout of the program embeds into the machine\n";
            return first.status == SearchStatus::Timeout ? kTimeout : kNoSolution;
        }
        layout = first.layout;
    }
    std::printf("# layout %s\n", join_layout(layout->mapping).c_str());
    std::cout << format_equations(build_equations(*layout, prog.sys.segments, aais));
    return kOk;
}

int cmd_list_machines() {
    for (const auto& name : builtin_aais_names()) std::printf("%s\n", name.c_str());
    return kOk;
}

struct BenchCase {
    std::string name, program, machine;
};

std::vector<BenchCase> bench_cases(const fs::path& dir) {
    std::vector<BenchCase> cases;
    fs::path manifest = dir / "suite.json";
    if (fs::exists(manifest)) {
        auto doc = nlohmann::json::parse(read_file(manifest.string()));
        for (const auto& c : doc.at("cases")) {
            cases.push_back({c.at("name").get<std::string>(), (dir / c.at("program").get<std::string>()).string(),
                             (dir / c.at("machine").get<std::string>()).string()});
        }
        return cases;
    }
    std::vector<fs::path> programs, machines;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".hml") programs.push_back(entry.path());
        if (entry.path().extension() == ".json") machines.push_back(entry.path());
    }
    std::sort(programs.begin(), programs.end());
    std::sort(machines.begin(), machines.end());
    for (const auto& p : programs)
        for (const auto& m : machines) cases.push_back({p.stem().string() + "@" + m.stem().string(), p.string(), m.string()});
    return cases;
}

int cmd_bench(const std::string& suite, const std::string& csv_path, double timeout, std::uint64_t seed) {
    if (!fs::is_directory(suite)) throw InputError(suite + " is not a directory");
    std::vector<BenchCase> cases = bench_cases(suite);
    std::ostringstream csv;
    csv << "case,n,machine,status,compile_ms,duration_s,blocks,residual\n";
    std::printf("%-28s %4s %-22s %-10s %10s %12s %7s %10s\n", "case", "n", "machine", "status", "compile_ms", "duration_s", "blocks", "residual");
    for (const auto& c : cases) {
        std::string status = "Error", machine = fs::path(c.machine).stem().string();
        std::size_t n = 0, blocks = 0;
        double ms = 0.0, duration = 0.0, residual = 0.0;
        try {
            Program prog = load_program(c.program, std::nullopt);
            n = prog.sys.num_sites();
            AAIS aais = load_machine(c.machine);
            CompileOptions opts;
            opts.timeout_s = timeout;
            opts.seed = seed;
            opts.discretization = std::max<std::uint32_t>(prog.steps, 1);
            auto t0 = std::chrono::steady_clock::now();
            CompileResult res = compile(prog.sys, aais, opts);
            ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            status = status_name(res.status);
            if (res.status == CompileStatus::Success) {
                duration = res.lines.total_duration_s;
                blocks = res.blocks.blocks.size();
                residual = res.solution.e;
            }
        } catch (const std::exception& e) {
            std::cerr << "analogc: " << c.name << ": " << e.what() << "\n";
        }
        char line[256];
        std::snprintf(line, sizeof line, "%s,%zu,%s,%s,%.1f,%.9g,%zu,%.6g\n", c.name.c_str(), n, machine.c_str(), status.c_str(), ms, duration, blocks, residual);
        csv << line;
        std::printf("%-28s %4zu %-22s %-10s %10.1f %12.6g %7zu %10.4g\n", c.name.c_str(), n, machine.c_str(), status.c_str(), ms, duration, blocks, residual);
        std::fflush(stdout);
    }
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + csv_path);
    out << csv.str();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analogc: pulse compiler for analog quantum simulation programs"};
    app.require_subcommand(1);

    CompileArgs ca;
    auto* compile_cmd = app.add_subcommand("compile", "Compile a program into a pulse schedule");
    compile_cmd->add_option("--system", ca.system, "HML program")->required();
    compile_cmd->add_option("--machine", ca.machine, "machine config JSON")->required();
    compile_cmd->add_option("--out", ca.out, "output schedule JSON")->required();
    compile_cmd->add_option("--trotter", ca.trotter, "Trotter repetitions R")->check(CLI::PositiveNumber);
    compile_cmd->add_option("--disc", ca.disc, "steps for every time-dependent clause")->check(CLI::PositiveNumber);
    compile_cmd->add_option("--tolerance", ca.tolerance, "residual tolerance epsilon")->check(CLI::PositiveNumber);
    compile_cmd->add_option("--delta", ca.delta, "rounding threshold")->check(CLI::NonNegativeNumber);
    compile_cmd->add_option("--timeout", ca.timeout, "seconds")->check(CLI::PositiveNumber);
    compile_cmd->add_option("--seed", ca.seed, "random seed");
    compile_cmd->add_option("--max-nodes", ca.max_nodes, "layout search node budget")->check(CLI::PositiveNumber);
    compile_cmd->add_option("--layout", ca.layout, "fixed layout: 'identity' or comma-separated device sites");

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "Check a schedule against its program with the dense oracle");
    verify_cmd->add_option("--system", va.system, "HML program")->required();
    verify_cmd->add_option("--machine", va.machine, "machine config JSON")->required();
    verify_cmd->add_option("--schedule", va.schedule, "schedule JSON")->required();
    verify_cmd->add_option("--threshold", va.threshold, "maximum phase-aligned distance")->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--disc", va.disc, "steps override; defaults to the schedule's discretization")->check(CLI::PositiveNumber);

    std::string is, im, il;
    std::optional<std::uint32_t> idisc;
    auto* inspect_cmd = app.add_subcommand("inspect", "Print the synthesis equations");
    inspect_cmd->add_option("--system", is, "HML program")->required();
    inspect_cmd->add_option("--machine", im, "machine config JSON")->required();
    inspect_cmd->add_option("--layout", il, "'identity' or comma-separated device sites; default is the first layout found");
    inspect_cmd->add_option("--disc", idisc, "steps override")->check(CLI::PositiveNumber);

    auto* list_cmd = app.add_subcommand("list-machines", "List built-in instruction sets");

    std::string suite, csv;
    double bench_timeout = 60.0;
    std::uint64_t bench_seed = 0;
    auto* bench_cmd = app.add_subcommand("bench", "Compile every case of a suite and write a CSV table");
    bench_cmd->add_option("--suite", suite, "suite directory")->required();
    bench_cmd->add_option("--out", csv, "CSV output")->required();
    bench_cmd->add_option("--timeout", bench_timeout, "seconds per case")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*compile_cmd) return cmd_compile(ca);
        if (*verify_cmd) return cmd_verify(va);
        if (*inspect_cmd) return cmd_inspect(is, im, il, idisc);
        if (*list_cmd) return cmd_list_machines();
        if (*bench_cmd) return cmd_bench(suite, csv, bench_timeout, bench_seed);
    } catch (const SizeGuardError& e) {
        std::cerr << "analogc: " << e.what() << "\n";
        return kTooLarge;
    } catch (const std::exception& e) {
        std::cerr << "analogc: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
