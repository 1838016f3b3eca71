#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "analogc/emit.hpp"
#include "analogc/hml.hpp"
#include "analogc/pipeline.hpp"
#include "random_dag.hpp"

using namespace analogc;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kGolden = std::string(ANALOGC_SOURCE_DIR) + "/tests/golden/ising3_schedule.json";

std::string expect_error(const std::string& bytes) {
    try {
        parse_schedule_document(bytes);
    } catch (const ScheduleError& e) {
        return e.pointer();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("empty schedule") {
    SignalLineSchedule sls;
    sls.aais = "ideal_rydberg";
    auto text = emit_json(sls, {});
    CHECK(text.back() == '\n');
    auto back = parse_schedule_document(text);
    CHECK(back.schedule.lines.empty());
    CHECK(back.schedule.total_duration_s == 0.0);
    CHECK(back.schedule == sls);
}

TEST_CASE("running example emits one execution per line") {
    auto sys = hml::parse_system(
        "system ising3 { sites q[3]; evolve for 1 under q[0].Z * q[1].Z + q[1].Z * q[2].Z + q[0].X + q[1].X + q[2].X; }");
    auto aais = build_ideal_rydberg(3, 5.42e6);
    auto r = compile(sys, aais, CompileOptions{});
    REQUIRE(r.status == CompileStatus::Success);
    auto doc = parse_schedule_document(emit_json(r.lines, r.metadata));
    REQUIRE(doc.schedule.lines.size() == 3);
    for (const auto& [line, execs] : doc.schedule.lines) {
        REQUIRE(execs.size() == 1);
        CHECK(execs[0].instruction == "eta_" + std::to_string(line));
        CHECK(execs[0].params.size() == 3);
        CHECK(execs[0].params.count("Delta") == 1);
        CHECK(execs[0].params.count("Omega") == 1);
        CHECK(execs[0].params.count("phi") == 1);
    }
    CHECK(doc.schedule.globals.size() == 3);
    CHECK(doc.metadata == r.metadata);
}

TEST_CASE("random schedules round-trip exactly") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<AAIS> machines = {build_heisenberg(3, {{0, 1}, {1, 2}}), build_ideal_rydberg(3, 5.42e6), build_ibm_native(3, {{0, 1}}, {})};
    for (auto& m : machines) {
        auto graph = conflict_graph(m);
        for (int trial = 0; trial < 100; ++trial) {
            auto bs = testing_dag::random_block_schedule(rng, m, graph);
            for (auto& b : bs.blocks)
                for (auto& e : b.executions)
                    for (auto& v : e.locals) v = u(rng) * std::exp(u(rng) / 100.0);
            auto sls = schedule(bs, m);
            CompileMetadata meta;
            meta.epsilon = std::abs(u(rng));
            meta.residual = std::abs(u(rng)) / 7.0;
            meta.trotter = static_cast<std::uint32_t>(rng() % 64 + 1);
            meta.seed = rng();
            meta.layout = {2, 0, 1};
            auto text = emit_json(sls, meta);
            auto back = parse_schedule_document(text);
            CHECK(back.schedule == sls);
            CHECK(back.metadata == meta);
            CHECK(emit_json(back.schedule, back.metadata) == text);
        }
    }
}

TEST_CASE("golden file is a fixed point") {
    auto bytes = read_file(kGolden);
    auto doc = parse_schedule_document(bytes);
    CHECK(emit_json(doc.schedule, doc.metadata) == bytes);
}

TEST_CASE("keys are sorted and numbers carry 17 digits") {
    SignalLineSchedule sls;
    sls.aais = "m";
    sls.globals = {{"x", 0.1}};
    auto text = emit_json(sls, {});
    CHECK(text.find("\"x\":0.10000000000000001") != std::string::npos);
    CHECK(text.find("\"aais\"") < text.find("\"blocks\""));
    CHECK(text.find("\"metadata\"") < text.find("\"schema_version\""));
    CHECK(text.find("\"schema_version\"") < text.find("\"total_duration_s\""));
}

TEST_CASE("malformed documents name the offending field") {
    auto golden = read_file(kGolden);
    auto replace = [&](const std::string& from, const std::string& to) {
        auto s = golden;
        auto at = s.find(from);
        REQUIRE(at != std::string::npos);
        return s.replace(at, from.size(), to);
    };
    CHECK(expect_error(replace("\"schema_version\":\"1\",", "")) == "/schema_version");
    CHECK(expect_error(replace("\"schema_version\":\"1\"", "\"schema_version\":\"9\"")) == "/schema_version");
    CHECK(expect_error(replace("\"aais\":", "\"extra\":1,\"aais\":")) == "/extra");
    CHECK(expect_error(replace("\"total_duration_s\":", "\"total_duration_s\":\"x\",\"ignored\":")) == "/ignored");
    CHECK(expect_error(replace("\"line\":0", "\"line\":-1")) == "/lines/0/line");
    CHECK(expect_error(replace("\"instruction\":\"eta_0\"", "\"instruction\":3")) == "/lines/0/executions/0/instruction");
    CHECK(expect_error("{") == "");
    CHECK(expect_error("[]") == "/");
}

TEST_CASE("overlapping executions on a line are rejected") {
    SignalLineSchedule sls;
    sls.aais = "m";
    TimedExecution a{"eta_0", {}, 0.0, 2.0, 1.0, 0};
    TimedExecution b{"eta_0", {}, 1.0, 3.0, 1.0, 1};
    sls.lines[0] = {a, b};
    sls.total_duration_s = 3.0;
    CHECK(expect_error(emit_json(sls, {})) == "/lines/0/executions/1");

    // Touching intervals and zero-length ones are fine.
    sls.lines[0][1].start_s = 2.0;
    CHECK(expect_error(emit_json(sls, {})) == "<none>");
    sls.lines[0][1] = {"eta_0", {}, 1.0, 1.0, 0.0, 1};
    CHECK(expect_error(emit_json(sls, {})) == "<none>");

    sls.lines[0][1] = {"eta_0", {}, 3.0, 2.5, 0.0, 1};
    CHECK(expect_error(emit_json(sls, {})) == "/lines/0/executions/1/end_s");
}
