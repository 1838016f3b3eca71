#include "analogc/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"

namespace analogc {

namespace {

using nlohmann::json;

void write(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map iteration: keys sorted
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                write(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                write(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) throw std::invalid_argument("emit_json: non-finite number");
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            break;
        }
        default: out += j.dump();
    }
}

json timing_json(const BlockTiming& b) {
    return json{{"block", b.block},       {"segment", b.segment}, {"group", b.group},
                {"repetition", b.repetition}, {"nominal_duration", b.nominal_duration}, {"start_s", b.start_s},
                {"end_s", b.end_s}, {"trotterized", b.trotterized}};
}

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) { throw ScheduleError(ptr, msg); }

const json& field(const json& obj, const std::string& ptr, const char* key) {
    if (!obj.contains(key)) fail(ptr + "/" + key, "missing");
    return obj.at(key);
}

bool flag(const json& obj, const std::string& ptr, const char* key) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(ptr + "/" + key, "expected a boolean");
    return v.get<bool>();
}

double number(const json& obj, const std::string& ptr, const char* key) {
    const json& v = field(obj, ptr, key);
    if (!v.is_number()) fail(ptr + "/" + key, "expected a number");
    return v.get<double>();
}

std::uint32_t uindex(const json& obj, const std::string& ptr, const char* key) {
    const json& v = field(obj, ptr, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) fail(ptr + "/" + key, "expected a non-negative integer");
    return v.get<std::uint32_t>();
}

std::string string(const json& obj, const std::string& ptr, const char* key) {
    const json& v = field(obj, ptr, key);
    if (!v.is_string()) fail(ptr + "/" + key, "expected a string");
    return v.get<std::string>();
}

void only_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) fail(ptr.empty() ? "/" : ptr, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(ptr + "/" + it.key(), "unknown key");
}

std::map<std::string, double> number_map(const json& obj, const std::string& ptr) {
    if (!obj.is_object()) fail(ptr, "expected an object");
    std::map<std::string, double> out;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!it.value().is_number()) fail(ptr + "/" + it.key(), "expected a number");
        out[it.key()] = it.value().get<double>();
    }
    return out;
}

}  // namespace

std::string emit_json(const SignalLineSchedule& sls, const CompileMetadata& meta) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["aais"] = sls.aais;
    doc["global_vars"] = json::object();
    for (const auto& [k, v] : sls.globals) doc["global_vars"][k] = v;
    doc["lines"] = json::array();
    for (const auto& [line, execs] : sls.lines) {
        json l{{"line", line}, {"executions", json::array()}};
        for (const auto& e : execs) {
            json params = json::object();
            for (const auto& [k, v] : e.params) params[k] = v;
            l["executions"].push_back(json{{"instruction", e.instruction},
                                           {"params", params},
                                           {"start_s", e.start_s},
                                           {"end_s", e.end_s},
                                           {"nominal_duration", e.nominal_duration},
                                           {"block", e.block}});
        }
        doc["lines"].push_back(std::move(l));
    }
    doc["blocks"] = json::array();
    for (const auto& b : sls.blocks) doc["blocks"].push_back(timing_json(b));
    doc["total_duration_s"] = sls.total_duration_s;
    doc["metadata"] = json{{"epsilon", meta.epsilon},
                           {"delta", meta.delta},
                           {"trotter", meta.trotter},
                           {"discretization", meta.discretization},
                           {"residual", meta.residual},
                           {"layout", meta.layout},
                           {"tool_version", meta.tool_version},
                           {"seed", meta.seed}};
    std::string out;
    write(doc, out);
    out += '\n';
    return out;
}

PulseScheduleDoc parse_schedule_document(const std::string& bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        fail("", std::string("invalid JSON: ") + e.what());
    }
    only_keys(doc, "", {"schema_version", "aais", "global_vars", "lines", "blocks", "total_duration_s", "metadata"});
    PulseScheduleDoc out;
    SignalLineSchedule& s = out.schedule;
    if (string(doc, "", "schema_version") != kSchemaVersion) fail("/schema_version", "unsupported version");
    s.aais = string(doc, "", "aais");
    s.globals = number_map(field(doc, "", "global_vars"), "/global_vars");

    const json& lines = field(doc, "", "lines");
    if (!lines.is_array()) fail("/lines", "expected an array");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string lp = "/lines/" + std::to_string(i);
        only_keys(lines[i], lp, {"line", "executions"});
        LineId id = uindex(lines[i], lp, "line");
        if (s.lines.count(id)) fail(lp + "/line", "duplicate line id");
        const json& execs = field(lines[i], lp, "executions");
        if (!execs.is_array()) fail(lp + "/executions", "expected an array");
        auto& vec = s.lines[id];
        for (std::size_t k = 0; k < execs.size(); ++k) {
            std::string ep = lp + "/executions/" + std::to_string(k);
            only_keys(execs[k], ep, {"instruction", "params", "start_s", "end_s", "nominal_duration", "block"});
            TimedExecution te;
            te.instruction = string(execs[k], ep, "instruction");
            te.params = number_map(field(execs[k], ep, "params"), ep + "/params");
            te.start_s = number(execs[k], ep, "start_s");
            te.end_s = number(execs[k], ep, "end_s");
            te.nominal_duration = number(execs[k], ep, "nominal_duration");
            te.block = execs[k].contains("block") ? uindex(execs[k], ep, "block") : 0;
            if (te.end_s < te.start_s) fail(ep + "/end_s", "ends before it starts");
            vec.push_back(std::move(te));
        }
        // Disjointness of non-empty intervals, checked in start order.
        std::vector<std::size_t> order(vec.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vec[a].start_s < vec[b].start_s; });
        double busy_until = -std::numeric_limits<double>::infinity();
        for (std::size_t k : order) {
            if (vec[k].end_s == vec[k].start_s) continue;
            if (vec[k].start_s < busy_until) fail(lp + "/executions/" + std::to_string(k), "overlaps another execution on this line");
            busy_until = vec[k].end_s;
        }
    }

    if (doc.contains("blocks")) {
        const json& blocks = doc.at("blocks");
        if (!blocks.is_array()) fail("/blocks", "expected an array");
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            std::string bp = "/blocks/" + std::to_string(i);
            only_keys(blocks[i], bp, {"block", "segment", "group", "repetition", "nominal_duration", "start_s", "end_s", "trotterized"});
            s.blocks.push_back(BlockTiming{uindex(blocks[i], bp, "block"), uindex(blocks[i], bp, "segment"), uindex(blocks[i], bp, "group"),
                                           uindex(blocks[i], bp, "repetition"), number(blocks[i], bp, "nominal_duration"),
                                           number(blocks[i], bp, "start_s"), number(blocks[i], bp, "end_s"), flag(blocks[i], bp, "trotterized")});
        }
    }
    s.total_duration_s = number(doc, "", "total_duration_s");

    if (doc.contains("metadata")) {
        const json& m = doc.at("metadata");
        if (!m.is_object()) fail("/metadata", "expected an object");
        CompileMetadata& meta = out.metadata;
        meta.epsilon = m.contains("epsilon") ? number(m, "/metadata", "epsilon") : 0.0;
        meta.delta = m.contains("delta") ? number(m, "/metadata", "delta") : 0.0;
        meta.trotter = m.contains("trotter") ? uindex(m, "/metadata", "trotter") : 1;
        meta.discretization = m.contains("discretization") ? uindex(m, "/metadata", "discretization") : 1;
        meta.residual = m.contains("residual") ? number(m, "/metadata", "residual") : 0.0;
        meta.tool_version = m.contains("tool_version") ? string(m, "/metadata", "tool_version") : "";
        if (m.contains("seed")) {
            if (!m.at("seed").is_number_unsigned()) fail("/metadata/seed", "expected a non-negative integer");
            meta.seed = m.at("seed").get<std::uint64_t>();
        }
        if (m.contains("layout")) {
            const json& l = m.at("layout");
            if (!l.is_array()) fail("/metadata/layout", "expected an array");
            for (std::size_t i = 0; i < l.size(); ++i) {
                if (!l[i].is_number_unsigned()) fail("/metadata/layout/" + std::to_string(i), "expected a site index");
                meta.layout.push_back(l[i].get<SiteId>());
            }
        }
    }
    return out;
}

SignalLineSchedule parse_schedule(const std::string& bytes) { return parse_schedule_document(bytes).schedule; }

std::string schedule_report(const SignalLineSchedule& sls) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "aais %s, %zu lines, %zu blocks, total %.6g s\n", sls.aais.c_str(), sls.lines.size(), sls.blocks.size(),
                  sls.total_duration_s);
    out += buf;
    for (const auto& [line, execs] : sls.lines) {
        std::snprintf(buf, sizeof buf, "  line %u: %zu executions\n", line, execs.size());
        out += buf;
        for (const auto& e : execs) {
            std::snprintf(buf, sizeof buf, "    [%.6g, %.6g) %s block %u nominal %.6g", e.start_s, e.end_s, e.instruction.c_str(), e.block,
                          e.nominal_duration);
            out += buf;
            for (const auto& [k, v] : e.params) {
                std::snprintf(buf, sizeof buf, " %s=%.6g", k.c_str(), v);
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

}  // namespace analogc
