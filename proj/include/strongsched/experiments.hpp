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

#ifndef STRONGSCHED_EXPERIMENTS_HPP
#define STRONGSCHED_EXPERIMENTS_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "strongsched/core.hpp"
#include "strongsched/equilibria.hpp"
#include "strongsched/measures.hpp"
#include "strongsched/schedulers.hpp"

namespace strongsched {

// Random draws use std::mt19937_64, whose output sequence the standard fixes,
// reduced as lo + (x mod (hi - lo + 1)). Distribution objects are avoided
// because their algorithms differ between standard libraries.
namespace detail {

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);
}

/// Seed of trial t: the splitmix64 finalizer of seed + (t + 1) * golden gamma.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// n integer processing times drawn uniformly from [1, p_max].
inline IdenticalInstance random_instance(std::uint64_t seed, std::size_t machines, std::size_t jobs,
                                         std::int64_t p_max) {
    if (machines == 0 || p_max <= 0) throw ValidationError("random instance needs m >= 1 and p_max >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Rational> times;
    times.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
        times.emplace_back(static_cast<std::int64_t>(detail::draw(rng, 1, static_cast<std::uint64_t>(p_max))));
    }
    return IdenticalInstance(machines, std::move(times));
}

/// Better-response dynamics from `start`: the lowest-index job that can
/// improve moves to its best machine (lowest index on ties) until no job
/// can. The sorted load vector strictly decreases with every move, so the
/// loop ends. observe(schedule, loads) sees every intermediate state.
inline Schedule best_response_dynamics(
    const IdenticalInstance& instance, Schedule start,
    const std::function<void(const Schedule&, const std::vector<Rational>&)>& observe = {}) {
    auto loads = load_profile(instance, start).loads;
    if (observe) observe(start, loads);
    while (true) {
        auto check = is_nash(instance, start);
        if (check.holds) return start;
        const JobIndex j = check.witness->job;
        const MachineIndex from = start[j];
        MachineIndex best = from;
        Rational best_cost = loads[from];
        for (MachineIndex i = 0; i < instance.machine_count(); ++i) {
            if (i == from) continue;
            Rational cost = loads[i] + instance.time(j);
            if (cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        loads[from] -= instance.time(j);
        loads[best] += instance.time(j);
        start[j] = best;
        if (observe) observe(start, loads);
    }
}

/// A random assignment driven to a Nash equilibrium.
inline Schedule random_ne(const IdenticalInstance& instance, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Schedule start;
    for (JobIndex j = 0; j < instance.job_count(); ++j) {
        start.assignment.push_back(detail::draw(rng, 0, instance.machine_count() - 1));
    }
    return best_response_dynamics(instance, std::move(start));
}

enum class SchedulerKind { lpt, ls, ptas, random_ne };

inline std::string to_string(SchedulerKind kind) {
    switch (kind) {
        case SchedulerKind::lpt: return "lpt";
        case SchedulerKind::ls: return "ls";
        case SchedulerKind::ptas: return "ptas";
        case SchedulerKind::random_ne: return "random-ne";
    }
    return "?";
}

struct SweepConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    std::pair<std::size_t, std::size_t> m_range{3, 3};
    std::pair<std::size_t, std::size_t> n_range{4, 8};
    std::int64_t p_max = 20;
    /// Every trial runs each listed scheduler on the same instance.
    std::vector<SchedulerKind> schedulers{SchedulerKind::lpt, SchedulerKind::random_ne};
    std::optional<Rational> eps;
    std::uint64_t budget = default_search_budget;
    /// Run the per-deviation structural checks (flower shape and friends).
    bool structural = true;
};

struct TrialRecord {
    std::size_t trial = 0;
    SchedulerKind scheduler = SchedulerKind::lpt;
    std::size_t m = 0;
    std::size_t n = 0;
    std::string digest;
    IdenticalInstance instance{1, {}};
    Schedule schedule;
    Rational makespan;
    Rational opt;
    Rational ir_min{1};
    Rational ir_max{1};
    Rational dr_max{1};
    std::uint64_t deviations = 0;
    bool bounds_ok = true;
    bool exhaustive = true;
};

/// A failed bound check with everything needed to replay it.
struct Violation {
    std::size_t trial = 0;
    SchedulerKind scheduler = SchedulerKind::lpt;
    std::string check;
    std::string detail;
    IdenticalInstance instance{1, {}};
    Schedule schedule;
    std::optional<Deviation> witness;
};

struct SweepReport {
    std::vector<TrialRecord> records;
    std::vector<Violation> violations;
    std::size_t inconclusive = 0;
    /// Profitable deviations examined across all trials.
    std::uint64_t deviations = 0;
    /// Per check name, how many times it was evaluated.
    std::vector<std::pair<std::string, std::uint64_t>> check_counts;
    double seconds = 0.0;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string csv() const;
};

inline std::string instance_digest(const IdenticalInstance& instance) {
    // FNV-1a over the canonical text form.
    std::string text = std::to_string(instance.machine_count()) + ":";
    for (const Rational& t : instance.times()) text += t.to_string() + ",";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline std::string SweepReport::csv() const {
    std::ostringstream os;
    os << "trial,scheduler,m,n,makespan,opt,ir_min,ir_max,dr_max,bounds_ok,exhaustive\n";
    for (const auto& r : records) {
        os << r.trial << ',' << to_string(r.scheduler) << ',' << r.m << ',' << r.n << ',' << r.makespan << ','
           << r.opt << ',' << r.ir_min << ',' << r.ir_max << ',' << r.dr_max << ',' << (r.bounds_ok ? 1 : 0) << ','
           << (r.exhaustive ? 1 : 0) << '\n';
    }
    return os.str();
}

namespace detail {

class TrialChecker {
  public:
    TrialChecker(SweepReport& report, TrialRecord& record) : report_(report), record_(record) {}

    void check(const std::string& name, bool ok, const std::string& text,
               const std::optional<Deviation>& witness = std::nullopt) {
        bump(name);
        if (ok) return;
        record_.bounds_ok = false;
        report_.violations.push_back(
            Violation{record_.trial, record_.scheduler, name, text, record_.instance, record_.schedule, witness});
    }

  private:
    void bump(const std::string& name) {
        for (auto& [key, count] : report_.check_counts) {
            if (key == name) {
                ++count;
                return;
            }
        }
        report_.check_counts.emplace_back(name, 1);
    }

    SweepReport& report_;
    TrialRecord& record_;
};

inline std::string ratio_text(const Rational& value, const std::string& op, const std::string& bound) {
    return value.to_string() + " (" + std::to_string(value.to_double()) + ") " + op + " " + bound;
}

inline Schedule build_schedule(SchedulerKind kind, const IdenticalInstance& instance, std::mt19937_64& rng,
                               const std::optional<Rational>& eps, std::uint64_t budget) {
    switch (kind) {
        case SchedulerKind::lpt: return lpt(instance);
        case SchedulerKind::ls: {
            std::vector<JobIndex> order(instance.job_count());
            std::iota(order.begin(), order.end(), JobIndex{0});
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[draw(rng, 0, i - 1)]);
            return list_schedule(instance, order);
        }
        case SchedulerKind::ptas: {
            PtasConfig config;
            config.epsilon = eps.value_or(Rational(1));
            config.budget = std::min<std::uint64_t>(budget, default_lex_budget);
            return ptas(instance, config);
        }
        case SchedulerKind::random_ne: return random_ne(instance, rng());
    }
    return lpt(instance);
}

inline void run_trial(const SweepConfig& config, std::size_t trial, SchedulerKind kind,
                      const IdenticalInstance& instance, std::mt19937_64& rng, SweepReport& report) {
    TrialRecord record;
    record.trial = trial;
    record.scheduler = kind;
    record.m = instance.machine_count();
    record.n = instance.job_count();
    record.digest = instance_digest(instance);
    record.instance = instance;
    record.schedule = build_schedule(kind, instance, rng, config.eps, config.budget);
    record.makespan = load_profile(instance, record.schedule).makespan;
    record.opt = optimal_makespan(instance).makespan;

    const auto m = static_cast<std::int64_t>(record.m);
    const bool from_ne = kind != SchedulerKind::ls;
    const bool from_lpt = kind == SchedulerKind::lpt;
    TrialChecker checks(report, record);

    // One exhaustive pass gives the three measures and the per-deviation checks.
    std::optional<Deviation> best_min_witness;
    std::optional<Deviation> best_max_witness;
    std::optional<Deviation> best_dr_witness;
    LoadRatio best_min{1, 1};
    LoadRatio best_max{1, 1};
    LoadRatio best_dr{1, 1};
    const bool nash = is_nash(instance, record.schedule).holds;
    auto result = for_each_profitable_deviation(instance, record.schedule, config.budget, [&](const DeviationView& v) {
        ++record.deviations;
        auto r = leaf_ratios(v);
        if (r.ir_min > best_min) {
            best_min = r.ir_min;
            best_min_witness = make_deviation(v, CoalitionMode::migrants_only);
        }
        if (r.ir_max > best_max) {
            best_max = r.ir_max;
            best_max_witness = make_deviation(v, CoalitionMode::migrants_plus_improvers);
        }
        if (r.dr_max > best_dr) {
            best_dr = r.dr_max;
            best_dr_witness = make_deviation(v, CoalitionMode::migrants_only);
        }
        if (config.structural && from_ne && nash) {
            auto structure = structural_checks(v, from_lpt);
            for (const auto& c : structure.checks) {
                checks.check("structure:" + c.name, c.passed, c.detail,
                             c.passed ? std::nullopt : std::optional<Deviation>(make_deviation(v, CoalitionMode::migrants_only)));
            }
        }
        return true;
    });
    record.exhaustive = result.end == SearchEnd::exhausted;
    record.ir_min = best_min.value();
    record.ir_max = best_max.value();
    record.dr_max = best_dr.value();
    report.deviations += record.deviations;

    if (!record.exhaustive) {
        ++report.inconclusive;
        report.records.push_back(std::move(record));
        return;
    }

    checks.check("measures_ordered", Rational(1) <= record.ir_min && record.ir_min <= record.ir_max &&
                                         Rational(1) <= record.dr_max,
                 record.ir_min.to_string() + " / " + record.ir_max.to_string() + " / " + record.dr_max.to_string());

    if (from_ne) {
        checks.check("ne:is_nash", nash, "schedule is not a Nash equilibrium");
        const Rational general = Rational(2) - Rational(2, m + 1);
        checks.check("ne:ir_min_general", record.ir_min <= general,
                     ratio_text(record.ir_min, "<=", general.to_string()), best_min_witness);
        if (m == 3) {
            checks.check("ne:ir_min_m3", record.ir_min <= Rational(5, 4), ratio_text(record.ir_min, "<=", "5/4"),
                         best_min_witness);
        }
        checks.check("ne:dr_max", record.dr_max < Rational(2), ratio_text(record.dr_max, "<", "2"), best_dr_witness);
        if (m == 2) {
            checks.check("ne:m2_strong", record.deviations == 0, "an equilibrium on two machines is not strong",
                         best_min_witness);
        }
    }

    if (from_lpt) {
        const Rational graham = Rational(4, 3) - Rational(1, 3 * m);
        checks.check("lpt:ir_min_general", record.ir_min <= graham,
                     ratio_text(record.ir_min, "<=", graham.to_string()), best_min_witness);
        checks.check("lpt:makespan", record.makespan <= graham * record.opt,
                     record.makespan.to_string() + " vs OPT " + record.opt.to_string());
        if (m == 3) {
            checks.check("lpt:ir_min_m3", at_most_half_plus_sqrt6_quarter(record.ir_min),
                         ratio_text(record.ir_min, "<=", "1/2+sqrt(6)/4"), best_min_witness);
            checks.check("lpt:ir_max_m3", record.ir_max <= Rational(5, 3), ratio_text(record.ir_max, "<=", "5/3"),
                         best_max_witness);
        }
        checks.check("lpt:dr_max", record.dr_max < Rational(3, 2), ratio_text(record.dr_max, "<", "3/2"),
                     best_dr_witness);

        // LPT restricted to a random machine subset reproduces itself.
        std::vector<MachineIndex> subset;
        while (subset.empty()) {
            for (MachineIndex i = 0; i < record.m; ++i) {
                if (draw(rng, 0, 1) == 1) subset.push_back(i);
            }
        }
        auto induced = induced_instance(instance, record.schedule, subset);
        checks.check("lpt:subset_preserving", lpt(induced.instance) == induced.schedule, "induced LPT differs");
    }

    if (kind == SchedulerKind::ptas) {
        const Rational eps = config.eps.value_or(Rational(1));
        checks.check("ptas:ir_min", record.ir_min <= Rational(1) + eps,
                     ratio_text(record.ir_min, "<=", (Rational(1) + eps).to_string()), best_min_witness);
        checks.check("ptas:makespan", record.makespan <= (Rational(1) + eps) * record.opt,
                     record.makespan.to_string() + " vs OPT " + record.opt.to_string());
    }

    if (kind == SchedulerKind::ls) {
        checks.check("ls:makespan", record.makespan <= (Rational(2) - Rational(1, m)) * record.opt,
                     record.makespan.to_string() + " vs OPT " + record.opt.to_string());
        // A single profitable migration at most doubles its target's load.
        const auto loads = load_profile(instance, record.schedule).loads;
        for (JobIndex j = 0; j < record.n; ++j) {
            for (MachineIndex i = 0; i < record.m; ++i) {
                if (i == record.schedule[j] || loads[i] == Rational(0)) continue;
                const Rational after = loads[i] + instance.time(j);
                if (!(after < loads[record.schedule[j]])) continue;
                Schedule to = record.schedule;
                to[j] = i;
                checks.check("ls:single_migrant_damage", after / loads[i] <= Rational(2),
                             ratio_text(after / loads[i], "<=", "2"),
                             Deviation{record.schedule, to, {j}, {j}});
            }
        }
    }
    report.records.push_back(std::move(record));
}

}  // namespace detail

/// Runs every configured scheduler on seeded random instances and checks each
/// applicable bound exactly. Rows come out in trial order.
inline SweepReport bound_sweep(const SweepConfig& config) {
    if (config.trials == 0) throw ValidationError("sweep needs at least one trial");
    if (config.m_range.first == 0 || config.m_range.first > config.m_range.second ||
        config.n_range.first > config.n_range.second) {
        throw ValidationError("bad machine or job range");
    }
    const auto started = std::chrono::steady_clock::now();
    SweepReport report;
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        std::mt19937_64 rng(detail::trial_seed(config.seed, trial));
        const auto m = static_cast<std::size_t>(detail::draw(rng, config.m_range.first, config.m_range.second));
        const auto n = static_cast<std::size_t>(detail::draw(rng, config.n_range.first, config.n_range.second));
        const auto instance = random_instance(rng(), m, n, config.p_max);
        for (SchedulerKind kind : config.schedulers) detail::run_trial(config, trial, kind, instance, rng, report);
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

/// PTAS-only sweep: NE, IR_min <= 1 + eps and makespan <= (1 + eps) OPT.
inline SweepReport ptas_sweep(SweepConfig config) {
    if (!config.eps) throw ValidationError("ptas sweep needs eps");
    if (*config.eps <= Rational(0)) throw ValidationError("eps must be positive");
    config.schedulers = {SchedulerKind::ptas};
    return bound_sweep(config);
}

}  // namespace strongsched

#endif  // STRONGSCHED_EXPERIMENTS_HPP
