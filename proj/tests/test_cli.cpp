#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "analogc/emit.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kSrc = ANALOGC_SOURCE_DIR;

fs::path scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("analogc_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// Runs the CLI with stdout and stderr captured in a scratch file; returns the exit code.
int run(const std::string& args, std::string* output = nullptr) {
    fs::path log = scratch() / "out.txt";
    std::string cmd = std::string("\"") + ANALOGC_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string program(const std::string& name) { return "\"" + kSrc + "/programs/" + name + "\""; }
std::string machine(const std::string& name) { return "\"" + kSrc + "/machines/" + name + "\""; }

std::string write_temp(const std::string& name, const std::string& text) {
    fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return "\"" + p.string() + "\"";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("compile and verify the running example") {
    fs::path out = scratch() / "ising3.json";
    std::string log;
    CHECK(run("compile --system " + program("ising3.hml") + " --machine " + machine("ideal_rydberg3.json") + " --out \"" + out.string() + "\"",
              &log) == 0);
    CHECK(log.find("Success") != std::string::npos);
    auto doc = analogc::parse_schedule_document(slurp(out));
    CHECK(doc.schedule.lines.size() == 3);

    // Output is byte-identical to the checked-in golden schedule.
    CHECK(slurp(out) == slurp(kSrc + "/tests/golden/ising3_schedule.json"));

    CHECK(run("verify --system " + program("ising3.hml") + " --machine " + machine("ideal_rydberg3.json") + " --schedule \"" + out.string() +
                  "\"",
              &log) == 0);
    CHECK(log.find("PASS") != std::string::npos);

    // A different program does not match this schedule.
    auto other = write_temp("other.hml", "system o { sites q[3]; evolve for 1 under 2 * q[0].X + q[1].Z * q[2].Z; }");
    CHECK(run("verify --system " + other + " --machine " + machine("ideal_rydberg3.json") + " --schedule \"" + out.string() + "\"") == 1);
}

TEST_CASE("compile exit codes") {
    fs::path out = scratch() / "x.json";
    std::string o = " --out \"" + out.string() + "\"";
    CHECK(run("compile --system " + program("ising_cycle6.hml") + " --machine " + machine("heisenberg_line6.json") + o) == 2);
    CHECK(run("compile --system " + program("ising_chain6.hml") + " --machine " + machine("heisenberg_line6.json") + o + " --max-nodes 1") == 3);
    CHECK(run("compile --system " + program("ising_chain6.hml") + " --machine " + machine("heisenberg_line6.json") + o) == 0);
    CHECK(run("compile --system " + program("ising3.hml") + " --machine " + machine("heisenberg_line6.json") + o + " --trotter 0") == 5);
    auto broken = write_temp("broken.hml", "system b { sites q[2]; evolve for under q[0].X; }");
    CHECK(run("compile --system " + broken + " --machine " + machine("ideal_rydberg3.json") + o) == 5);
    CHECK(run("compile --system \"" + (scratch() / "missing.hml").string() + "\" --machine " + machine("ideal_rydberg3.json") + o) == 5);
    auto bad_machine = write_temp("bad.json", "{\"aais\": \"no_such_machine\", \"num_sites\": 3}");
    CHECK(run("compile --system " + program("ising3.hml") + " --machine " + bad_machine + o) == 5);
}

TEST_CASE("verify refuses more than twelve sites") {
    std::string text = "system big { sites q[13]; evolve for 1 under ";
    for (int j = 0; j < 12; ++j) text += "q[" + std::to_string(j) + "].Z * q[" + std::to_string(j + 1) + "].Z + ";
    text += "q[0].X; }";
    auto big = write_temp("big.hml", text);
    fs::path out = scratch() / "big.json";
    REQUIRE(run("compile --system " + big + " --machine " + machine("heisenberg_line13.json") + " --out \"" + out.string() + "\"") == 0);
    CHECK(run("verify --system " + big + " --machine " + machine("heisenberg_line13.json") + " --schedule \"" + out.string() + "\"") == 4);

    auto garbage = write_temp("garbage.json", "{\"schema_version\": \"1\"}");
    CHECK(run("verify --system " + program("ising3.hml") + " --machine " + machine("ideal_rydberg3.json") + " --schedule " + garbage) == 5);
}

TEST_CASE("bench and list-machines") {
    fs::path empty = scratch() / "empty_suite";
    fs::create_directories(empty);
    fs::path csv = scratch() / "bench.csv";
    CHECK(run("bench --suite \"" + empty.string() + "\" --out \"" + csv.string() + "\"") == 0);
    CHECK(slurp(csv) == "case,n,machine,status,compile_ms,duration_s,blocks,residual\n");
    CHECK(run("bench --suite \"" + (scratch() / "nope").string() + "\" --out \"" + csv.string() + "\"") == 5);

    std::string log;
    CHECK(run("list-machines", &log) == 0);
    for (const char* name : {"ideal_rydberg", "global_rydberg", "heisenberg", "ibm_native"}) CHECK(log.find(name) != std::string::npos);

    CHECK(run("", &log) == 5);
    CHECK(run("--help", &log) == 0);
}
