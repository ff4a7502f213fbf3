/*
Copyright 2026 The strongsched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef STRONGSCHED_IO_HPP
#define STRONGSCHED_IO_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "strongsched/core.hpp"
#include "strongsched/equilibria.hpp"
#include "strongsched/experiments.hpp"
#include "strongsched/measures.hpp"

// JSON layouts. Rationals are strings ("5", "1.633", "1/3"); plain JSON
// integers are accepted on input. Machines and jobs are numbered from 1.
//
//   identical instance: {"machines": 3, "jobs": ["5", "5", "3"]}
//   unrelated instance: {"machines": 2, "matrix": [["1", "1/10"], ["1/10", "1"]]}   rows = machines
//   schedule:           {"assignment": [1, 1, 2]}
//   deviation:          {"from": [...], "to": [...], "migrants": [...], "coalition": [...]}

namespace strongsched::io {

using json = nlohmann::json;
using AnyInstance = std::variant<IdenticalInstance, UnrelatedInstance>;

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw ValidationError("expected a rational as a string or integer, got " + j.dump());
}

inline json to_json(const Rational& r) { return r.to_string(); }

inline std::size_t machine_count_from_json(const json& j) {
    if (!j.is_object() || !j.contains("machines")) throw ValidationError("instance needs a \"machines\" field");
    const json& m = j.at("machines");
    if (!m.is_number_integer() || m.get<std::int64_t>() < 1) {
        throw ValidationError("\"machines\" must be a positive integer");
    }
    return static_cast<std::size_t>(m.get<std::int64_t>());
}

inline AnyInstance instance_from_json(const json& j) {
    const std::size_t m = machine_count_from_json(j);
    if (j.contains("jobs")) {
        if (!j.at("jobs").is_array()) throw ValidationError("\"jobs\" must be an array");
        std::vector<Rational> times;
        for (const json& t : j.at("jobs")) times.push_back(rational_from_json(t));
        return IdenticalInstance(m, std::move(times));
    }
    if (j.contains("matrix")) {
        const json& rows = j.at("matrix");
        if (!rows.is_array() || rows.size() != m) {
            throw ValidationError("\"matrix\" must have one row per machine");
        }
        std::vector<std::vector<Rational>> matrix;
        for (const json& row : rows) {
            if (!row.is_array()) throw ValidationError("matrix rows must be arrays");
            auto& out = matrix.emplace_back();
            for (const json& t : row) out.push_back(rational_from_json(t));
        }
        return UnrelatedInstance(std::move(matrix));
    }
    throw ValidationError("instance needs either \"jobs\" or \"matrix\"");
}

inline json to_json(const IdenticalInstance& instance) {
    json jobs = json::array();
    for (const Rational& t : instance.times()) jobs.push_back(to_json(t));
    return json{{"machines", instance.machine_count()}, {"jobs", jobs}};
}

inline json to_json(const UnrelatedInstance& instance) {
    json rows = json::array();
    for (const auto& row : instance.matrix()) {
        json r = json::array();
        for (const Rational& t : row) r.push_back(to_json(t));
        rows.push_back(r);
    }
    return json{{"machines", instance.machine_count()}, {"matrix", rows}};
}

inline json to_json(const AnyInstance& instance) {
    return std::visit([](const auto& inst) { return to_json(inst); }, instance);
}

inline json assignment_to_json(const Schedule& s) {
    json a = json::array();
    for (MachineIndex i : s.assignment) a.push_back(i + 1);
    return a;
}

inline Schedule assignment_from_json(const json& a) {
    if (!a.is_array()) throw ValidationError("assignment must be an array of machine numbers");
    Schedule s;
    for (const json& v : a) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
            throw ValidationError("machine numbers start at 1, got " + v.dump());
        }
        s.assignment.push_back(static_cast<MachineIndex>(v.get<std::int64_t>() - 1));
    }
    return s;
}

inline json to_json(const Schedule& s) { return json{{"assignment", assignment_to_json(s)}}; }

inline Schedule schedule_from_json(const json& j) {
    if (!j.is_object() || !j.contains("assignment")) throw ValidationError("schedule needs an \"assignment\" field");
    return assignment_from_json(j.at("assignment"));
}

inline json jobs_to_json(const std::vector<JobIndex>& jobs) {
    json a = json::array();
    for (JobIndex j : jobs) a.push_back(j + 1);
    return a;
}

inline json to_json(const Deviation& d) {
    return json{{"from", assignment_to_json(d.from)},
                {"to", assignment_to_json(d.to)},
                {"migrants", jobs_to_json(d.migrants)},
                {"coalition", jobs_to_json(d.coalition)}};
}

inline Deviation deviation_from_json(const json& j) {
    Deviation d;
    d.from = assignment_from_json(j.at("from"));
    d.to = assignment_from_json(j.at("to"));
    for (const json& v : j.at("migrants")) d.migrants.push_back(v.get<std::size_t>() - 1);
    for (const json& v : j.at("coalition")) d.coalition.push_back(v.get<std::size_t>() - 1);
    return d;
}

inline json to_json(const MeasureResult& r) {
    json out{{"value", to_json(r.value)}, {"approx", r.value.to_double()}, {"exhaustive", r.exhaustive}};
    out["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
    return out;
}

inline json to_json(const MeasureReport& r) {
    return json{{"ir_min", to_json(r.ir_min)},
                {"ir_max", to_json(r.ir_max)},
                {"dr_max", to_json(r.dr_max)},
                {"exhaustive", r.exhaustive},
                {"deviations", r.deviations},
                {"nodes", r.nodes}};
}

inline json to_json(const Violation& v) {
    json out{{"trial", v.trial},
             {"scheduler", to_string(v.scheduler)},
             {"check", v.check},
             {"detail", v.detail},
             {"instance", to_json(v.instance)},
             {"schedule", to_json(v.schedule)}};
    out["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
    return out;
}

/// Summary of a sweep. Timing is the only field that varies between runs.
inline json to_json(const SweepReport& report) {
    json checks = json::object();
    for (const auto& [name, count] : report.check_counts) checks[name] = count;
    json violations = json::array();
    for (const auto& v : report.violations) violations.push_back(to_json(v));
    return json{{"trials", report.records.size()},
                {"deviations", report.deviations},
                {"inconclusive", report.inconclusive},
                {"checks", checks},
                {"violations", violations},
                {"ok", report.ok()},
                {"seconds", report.seconds}};
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << text;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace strongsched::io

#endif  // STRONGSCHED_IO_HPP
