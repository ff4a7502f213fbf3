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

#ifndef STRONGSCHED_TOOLS_CLI_HPP
#define STRONGSCHED_TOOLS_CLI_HPP

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strongsched/strongsched.hpp"

namespace strongsched::cli {

using io::json;

enum ExitCode : int { holds = 0, fails = 1, usage = 2, budget = 3 };

struct Verdict {
    std::string command;
    json payload;
    int exit_code = holds;
};

namespace detail {

struct UsageError : ValidationError {
    using ValidationError::ValidationError;
};

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

inline std::int64_t parse_int(const std::string& text) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size()) throw UsageError("not an integer: " + text);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("not an integer: " + text);
    }
}

/// "3" or "4..8".
inline std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        auto v = static_cast<std::size_t>(parse_int(text));
        return {v, v};
    }
    return {static_cast<std::size_t>(parse_int(text.substr(0, dots))),
            static_cast<std::size_t>(parse_int(text.substr(dots + 2)))};
}

inline std::vector<JobIndex> parse_job_list(const std::string& text) {
    std::vector<JobIndex> jobs;
    for (const auto& part : split(text, ',')) {
        auto v = parse_int(part);
        if (v < 1) throw UsageError("job numbers start at 1, got " + part);
        jobs.push_back(static_cast<JobIndex>(v - 1));
    }
    return jobs;
}

inline IdenticalInstance require_identical(const io::AnyInstance& instance, const std::string& what) {
    if (const auto* identical = std::get_if<IdenticalInstance>(&instance)) return *identical;
    throw UsageError(what + " is defined for identical machines only");
}

inline json deviation_or_null(const std::optional<Deviation>& d) { return d ? io::to_json(*d) : json(nullptr); }

struct Options {
    std::string in;
    std::string schedule;
    std::string out;
    std::string format = "json";
    std::uint64_t budget = default_search_budget;

    std::string alg;
    std::string eps;
    std::string order;
    std::size_t k = 0;
    bool refine = false;

    bool ne = false;
    bool se = false;
    std::string coalition;

    bool table1 = false;

    std::string figure;
    std::vector<std::string> params;

    std::string set;
    std::string variant = "identical";
    std::size_t machines = 3;
    bool verify = false;

    std::string preset = "table1";
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    std::string m_range = "3";
    std::string n_range = "4..8";
    std::int64_t p_max = 20;
    std::vector<std::string> schedulers;
};

inline Verdict run_schedule(const Options& o) {
    auto instance = require_identical(io::instance_from_json(io::read_json_file(o.in)), "scheduling");
    Schedule s;
    json info{{"alg", o.alg}};
    if (o.alg == "lpt") {
        s = lpt(instance);
    } else if (o.alg == "ls") {
        std::vector<JobIndex> order;
        if (o.order.empty()) {
            order.resize(instance.job_count());
            std::iota(order.begin(), order.end(), JobIndex{0});
        } else {
            order = parse_job_list(o.order);
        }
        s = list_schedule(instance, order);
    } else if (o.alg == "ptas") {
        PtasConfig config;
        config.epsilon = o.eps.empty() ? Rational(1) : Rational::parse(o.eps);
        config.refine = o.refine;
        if (o.k > 0) config.k_override = o.k;
        auto outcome = ptas_detailed(instance, config);
        s = outcome.schedule;
        info["eps"] = io::to_json(config.epsilon);
        info["k"] = outcome.k;
        json frozen = json::array();
        for (MachineIndex i : outcome.frozen) frozen.push_back(i + 1);
        info["frozen"] = frozen;
    } else {
        throw UsageError("--alg must be lpt, ls or ptas");
    }
    if (!o.out.empty()) io::write_json_file(o.out, io::to_json(s));
    auto profile = load_profile(instance, s);
    json loads = json::array();
    for (const auto& l : profile.loads) loads.push_back(io::to_json(l));
    info["assignment"] = io::assignment_to_json(s);
    info["loads"] = loads;
    info["makespan"] = io::to_json(profile.makespan);
    return Verdict{"schedule", info, holds};
}

inline Verdict run_check(Options o) {
    auto instance = io::instance_from_json(io::read_json_file(o.in));
    auto schedule = io::schedule_from_json(io::read_json_file(o.schedule));
    if (!o.ne && !o.se && o.coalition.empty()) o.ne = o.se = true;
    json payload = json::object();
    bool all_hold = true;
    std::visit(
        [&](const auto& inst) {
            validate(inst, schedule);
            if (o.ne) {
                auto r = is_nash(inst, schedule);
                json w = nullptr;
                if (r.witness) w = json{{"job", r.witness->job + 1}, {"target", r.witness->target + 1}};
                payload["ne"] = json{{"holds", r.holds}, {"witness", w}};
                all_hold = all_hold && r.holds;
            }
            if (o.se) {
                auto r = is_strong(inst, schedule, o.budget);
                payload["se"] = json{{"holds", r.holds}, {"witness", deviation_or_null(r.witness)}};
                all_hold = all_hold && r.holds;
            }
            if (!o.coalition.empty()) {
                auto members = parse_job_list(o.coalition);
                auto d = can_coalition_deviate(inst, schedule, members, o.budget);
                payload["coalition"] = json{{"members", io::jobs_to_json(members)},
                                            {"can_deviate", d.has_value()},
                                            {"witness", deviation_or_null(d)}};
                all_hold = all_hold && !d;
            }
        },
        instance);
    payload["holds"] = all_hold;
    return Verdict{"check", payload, all_hold ? holds : fails};
}

struct Bounds {
    std::string ir_min;
    std::string ir_max;
    std::string dr_max;
};

inline Bounds table1_bounds(const IdenticalInstance& instance, const Schedule& schedule) {
    const auto m = static_cast<std::int64_t>(instance.machine_count());
    if (!is_nash(instance, schedule).holds) return {"none", "none", "none"};
    if (lpt(instance) == schedule) {
        return {m == 3 ? "1/2+sqrt(6)/4" : (Rational(4, 3) - Rational(1, 3 * m)).to_string(),
                m == 3 ? "5/3" : "2-1/m", "<3/2"};
    }
    if (m == 2) return {"1", "1", "1"};
    return {m == 3 ? "5/4" : (Rational(2) - Rational(2, m + 1)).to_string(), "unbounded", "<2"};
}

inline Verdict run_measures(const Options& o, std::ostream& out, bool& printed) {
    auto instance = io::instance_from_json(io::read_json_file(o.in));
    auto schedule = io::schedule_from_json(io::read_json_file(o.schedule));
    MeasureReport report = std::visit([&](const auto& inst) { return measure_report(inst, schedule, o.budget); },
                                      instance);
    json payload = io::to_json(report);
    const int code = report.exhaustive ? holds : budget;

    if (o.table1 || o.format == "csv") {
        Bounds bounds{"none", "none", "none"};
        if (const auto* identical = std::get_if<IdenticalInstance>(&instance)) {
            bounds = table1_bounds(*identical, schedule);
        }
        std::ostringstream csv;
        csv << "measure,bound,observed,witness_file\n";
        auto row = [&](const std::string& name, const std::string& bound, const MeasureResult& r) {
            std::string file = "-";
            if (!o.out.empty() && r.witness) {
                auto path = std::filesystem::path(o.out) / (name + "_witness.json");
                io::write_json_file(path, io::to_json(*r.witness));
                file = path.string();
            }
            csv << name << ',' << bound << ',' << r.value << ',' << file << '\n';
        };
        row("ir_min", bounds.ir_min, report.ir_min);
        row("ir_max", bounds.ir_max, report.ir_max);
        row("dr_max", bounds.dr_max, report.dr_max);
        out << csv.str();
        printed = true;
        payload["table1"] = csv.str();
    }
    return Verdict{"measures", payload, code};
}

inline std::map<std::string, std::string> parse_params(const std::vector<std::string>& params) {
    std::map<std::string, std::string> out;
    for (const auto& p : params) {
        for (const auto& item : split(p, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("--param expects key=value, got " + item);
            out[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    return out;
}

inline Verdict run_witness(const Options& o) {
    auto params = parse_params(o.params);
    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    json payload{{"figure", o.figure}};
    json files = json::array();
    auto emit = [&](const std::string& name, const json& content) {
        payload[name] = content;
        if (o.out.empty()) return;
        auto path = std::filesystem::path(o.out) / (name + ".json");
        io::write_json_file(path, content);
        files.push_back(path.string());
    };
    auto emit_witness = [&](const auto& w) {
        emit("instance", io::to_json(w.instance));
        emit("schedule", io::to_json(w.schedule));
        if (w.deviation) emit("deviation", io::to_json(*w.deviation));
    };

    if (o.figure == "1") {
        emit_witness(figure1());
    } else if (o.figure == "3") {
        emit_witness(figure3(Rational::parse(get("r", "3")), static_cast<std::size_t>(parse_int(get("m", "3")))));
    } else if (o.figure == "9") {
        emit_witness(figure9());
    } else if (o.figure == "fn5") {
        emit_witness(footnote5(Rational::parse(get("eps", "1/10"))));
    } else if (o.figure == "ls") {
        auto ex = ls_examples(Rational::parse(get("X", get("x", "10"))), Rational::parse(get("eps", "1/10")));
        emit("trapped_instance", io::to_json(ex.trapped_instance));
        emit("trapped_schedule", io::to_json(ex.trapped_schedule));
        emit("trapped_move", json{{"job", ex.trapped_move.job + 1},
                                  {"target", ex.trapped_move.target + 1},
                                  {"ratio", io::to_json(ex.trapped_ratio)}});
        emit("damage_instance", io::to_json(ex.damage_instance));
        emit("damage_schedule", io::to_json(ex.damage_schedule));
    } else {
        throw UsageError("--figure must be one of 1, 3, 9, fn5, ls");
    }
    payload["files"] = files;
    return Verdict{"witness", payload, holds};
}

inline Verdict run_reduce(const Options& o) {
    std::vector<std::int64_t> values;
    for (const auto& part : split(o.set, ',')) values.push_back(parse_int(part));
    if (values.empty()) throw UsageError("--set needs a comma-separated list of integers");

    json payload{{"variant", o.variant}};
    json partition_values = nullptr;
    auto fill = [&](const auto& artifact) {
        json set = json::array();
        for (auto v : artifact.partition_set) set.push_back(v);
        if (artifact.partition) {
            partition_values = json::array();
            for (auto k : *artifact.partition) partition_values.push_back(artifact.partition_set[k]);
        }
        json meta{{"partition_set", set},
                  {"expected_se", *artifact.expected_se},
                  {"partition", partition_values},
                  {"predicted_deviation", deviation_or_null(artifact.predicted_deviation)}};
        payload["artifact"] = meta;
        payload["instance"] = io::to_json(artifact.instance);
        payload["schedule"] = io::to_json(artifact.start_schedule);
        if (!o.out.empty()) {
            std::filesystem::path dir(o.out);
            io::write_json_file(dir / "instance.json", payload["instance"]);
            io::write_json_file(dir / "schedule.json", payload["schedule"]);
            io::write_json_file(dir / "artifact.json", meta);
        }
        int code = holds;
        if (o.verify) {
            auto r = is_strong(artifact.instance, artifact.start_schedule, o.budget);
            payload["verified_se"] = r.holds;
            payload["verified"] = r.holds == *artifact.expected_se;
            if (r.holds != *artifact.expected_se) code = fails;
        }
        return code;
    };

    int code = holds;
    if (o.variant == "identical") {
        code = fill(reduce_partition_identical(values, o.machines));
    } else if (o.variant == "unrelated") {
        Rational eps = o.eps.empty() ? Rational(1, static_cast<std::int64_t>(values.size())) : Rational::parse(o.eps);
        code = fill(reduce_partition_unrelated(values, eps));
    } else {
        throw UsageError("--variant must be identical or unrelated");
    }
    return Verdict{"reduce", payload, code};
}

inline SchedulerKind parse_scheduler(const std::string& name) {
    if (name == "lpt") return SchedulerKind::lpt;
    if (name == "ls") return SchedulerKind::ls;
    if (name == "ptas") return SchedulerKind::ptas;
    if (name == "random-ne" || name == "random-NE") return SchedulerKind::random_ne;
    throw UsageError("unknown scheduler " + name);
}

inline Verdict run_experiment(const Options& o, std::ostream& out, bool& printed) {
    SweepConfig config;
    config.seed = o.seed;
    config.trials = o.trials;
    config.m_range = parse_range(o.m_range);
    config.n_range = parse_range(o.n_range);
    config.p_max = o.p_max;
    config.budget = o.budget;
    if (!o.eps.empty()) config.eps = Rational::parse(o.eps);

    SweepReport report;
    if (o.preset == "table1") {
        config.schedulers = {SchedulerKind::lpt, SchedulerKind::random_ne};
        if (!o.schedulers.empty()) {
            config.schedulers.clear();
            for (const auto& s : o.schedulers) config.schedulers.push_back(parse_scheduler(s));
        }
        report = bound_sweep(config);
    } else if (o.preset == "ptas") {
        if (!config.eps) config.eps = Rational(1);
        report = ptas_sweep(config);
    } else {
        throw UsageError("--preset must be table1 or ptas");
    }

    if (!o.out.empty()) io::write_text_file(o.out, report.csv());
    if (o.format == "csv" && o.out.empty()) {
        out << report.csv();
        printed = true;
    }
    json payload = io::to_json(report);
    payload["preset"] = o.preset;
    payload["seed"] = o.seed;
    if (!o.out.empty()) payload["csv"] = o.out;
    return Verdict{"experiment", payload, report.ok() ? holds : fails};
}

}  // namespace detail

/// Parses args (without the program name), runs the subcommand and writes
/// its JSON payload to out. Diagnostics go to err. Never throws.
inline Verdict run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::Options o;
    CLI::App app{"Strong-equilibrium analysis for job scheduling games", "strongsched"};
    app.require_subcommand(1);

    auto add_io = [&](CLI::App* sub, bool schedule) {
        sub->add_option("--in", o.in, "instance JSON")->required();
        if (schedule) sub->add_option("--schedule", o.schedule, "schedule JSON")->required();
        sub->add_option("--budget", o.budget, "search node budget");
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* schedule = app.add_subcommand("schedule", "assign jobs with LPT, List Scheduling or the PTAS");
    add_io(schedule, false);
    schedule->add_option("--alg", o.alg, "lpt | ls | ptas")->required();
    schedule->add_option("--eps", o.eps, "PTAS accuracy, e.g. 1/2");
    schedule->add_flag("--refine", o.refine, "freeze makespan machines holding only long jobs");
    schedule->add_option("--k", o.k, "override the number of long jobs");
    schedule->add_option("--order", o.order, "List Scheduling order, e.g. 3,1,2");
    schedule->add_option("--out", o.out, "schedule JSON to write");

    auto* check = app.add_subcommand("check", "test Nash / strong equilibrium or a coalition");
    add_io(check, true);
    check->add_flag("--ne", o.ne, "unilateral stability");
    check->add_flag("--se", o.se, "coalitional stability");
    check->add_option("--coalition", o.coalition, "jobs of a coalition, e.g. 1,2,5");
    check->add_option("--out", o.out, "unused");

    auto* measures = app.add_subcommand("measures", "IR_min, IR_max and DR_max of a schedule");
    add_io(measures, true);
    measures->add_flag("--table1", o.table1, "emit a CSV of measure, bound, observed value, witness file");
    measures->add_option("--out", o.out, "directory for witness files");

    auto* witness = app.add_subcommand("witness", "write a known lower-bound construction");
    witness->add_option("--figure", o.figure, "1 | 3 | 9 | fn5 | ls")->required();
    witness->add_option("--param", o.params, "key=value, e.g. r=3");
    witness->add_option("--out", o.out, "output directory");
    witness->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* reduce = app.add_subcommand("reduce", "build the Partition reduction instances");
    reduce->add_option("--set", o.set, "Partition numbers, e.g. 3,3,4,4")->required();
    reduce->add_option("--variant", o.variant, "identical | unrelated");
    reduce->add_option("--m", o.machines, "machines (identical variant)");
    reduce->add_option("--eps", o.eps, "epsilon (unrelated variant), default 1/|A|");
    reduce->add_option("--out", o.out, "output directory");
    reduce->add_option("--budget", o.budget, "node budget for --verify");
    reduce->add_flag("--verify", o.verify, "confirm the SE verdict by exhaustive search");
    reduce->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* experiment = app.add_subcommand("experiment", "seeded random sweep over the bounds");
    experiment->add_option("--preset", o.preset, "table1 | ptas");
    experiment->add_option("--seed", o.seed);
    experiment->add_option("--trials", o.trials);
    experiment->add_option("--m", o.m_range, "machines, e.g. 3 or 4..5");
    experiment->add_option("--n", o.n_range, "jobs, e.g. 4..8");
    experiment->add_option("--p-max", o.p_max, "largest processing time");
    experiment->add_option("--eps", o.eps, "PTAS accuracy");
    experiment->add_option("--scheduler", o.schedulers, "lpt, ls, ptas, random-ne (repeatable)");
    experiment->add_option("--out", o.out, "CSV report path");
    experiment->add_option("--budget", o.budget, "node budget per schedule");
    experiment->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    Verdict verdict;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Verdict{"help", json::object(), holds};
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        verdict = Verdict{"usage", json{{"error", e.what()}}, usage};
        out << verdict.payload.dump(2) << "\n";
        return verdict;
    }

    bool printed = false;
    try {
        if (schedule->parsed()) {
            verdict = detail::run_schedule(o);
        } else if (check->parsed()) {
            verdict = detail::run_check(o);
        } else if (measures->parsed()) {
            verdict = detail::run_measures(o, out, printed);
        } else if (witness->parsed()) {
            verdict = detail::run_witness(o);
        } else if (reduce->parsed()) {
            verdict = detail::run_reduce(o);
        } else {
            verdict = detail::run_experiment(o, out, printed);
        }
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        verdict = Verdict{"budget",
                          json{{"error", e.what()}, {"budget", e.budget()}, {"explored_fraction", e.explored_fraction()}},
                          budget};
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        verdict = Verdict{"usage", json{{"error", e.what()}}, usage};
    }
    verdict.payload["command"] = verdict.command;
    verdict.payload["exit_code"] = verdict.exit_code;
    if (!printed) out << verdict.payload.dump(2) << "\n";
    return verdict;
}

}  // namespace strongsched::cli

#endif  // STRONGSCHED_TOOLS_CLI_HPP
