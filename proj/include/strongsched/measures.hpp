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

#ifndef STRONGSCHED_MEASURES_HPP
#define STRONGSCHED_MEASURES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strongsched/core.hpp"
#include "strongsched/equilibria.hpp"

namespace strongsched {

struct JobRatio {
    JobIndex job = 0;
    Rational ratio;
    friend bool operator==(const JobRatio&, const JobRatio&) = default;
};

/// Everything one deviation does to the jobs and machines.
struct DeviationStats {
    /// Migrants, then stayers on machines whose load strictly dropped.
    std::vector<JobRatio> improvement;
    /// Stayers on machines whose load strictly grew.
    std::vector<JobRatio> damage;
    /// migration[i][k]: some job moves from machine i to machine k.
    std::vector<std::vector<bool>> migration;
    /// Load of the jobs that stay on each machine.
    std::vector<Rational> staying_load;
    /// migrating_load[i][k]: load moving from machine i to machine k,
    /// measured with the processing times on machine i.
    std::vector<std::vector<Rational>> migrating_load;
    std::vector<Rational> old_loads;
    std::vector<Rational> new_loads;
};

/// One schedule measure: its value and a deviation attaining it.
struct MeasureResult {
    /// 1 when no profitable deviation exists.
    Rational value{1};
    std::optional<Deviation> witness;
    /// False when the node budget cut the search short; the value is then
    /// only a lower bound.
    bool exhaustive = true;
};

struct MeasureReport {
    MeasureResult ir_min;
    MeasureResult ir_max;
    MeasureResult dr_max;
    bool exhaustive = true;
    std::uint64_t deviations = 0;
    std::uint64_t nodes = 0;
};

namespace detail {

inline void require_profitable(const ScaledGame& g, const Schedule& s, const Schedule& t) {
    if (t.size() != g.n) throw ValidationError("deviation target has the wrong number of jobs");
    for (JobIndex j = 0; j < g.n; ++j) {
        if (t[j] >= g.m) throw ValidationError("deviation target uses a machine that does not exist");
    }
    if (s == t) throw ValidationError("a deviation needs at least one migrating job");
    auto old_loads = g.loads(s.assignment);
    auto new_loads = g.loads(t.assignment);
    for (JobIndex j = 0; j < g.n; ++j) {
        if (s[j] != t[j] && !(new_loads[t[j]] < old_loads[s[j]])) {
            throw ValidationError("not a profitable deviation: migrating job " + std::to_string(j + 1) +
                                  " does not strictly improve");
        }
    }
}

inline std::vector<std::vector<bool>> migration_matrix(const DeviationView& v) {
    std::vector<std::vector<bool>> p(v.game.m, std::vector<bool>(v.game.m, false));
    for (JobIndex j = 0; j < v.game.n; ++j) {
        if (v.from[j] != v.to[j]) p[v.from[j]][v.to[j]] = true;
    }
    return p;
}

/// The most loaded machine of the start schedule; among ties, the lowest
/// index touched by some migration, else the lowest index.
inline MachineIndex flower_center(const DeviationView& v, const std::vector<std::vector<bool>>& p) {
    const std::int64_t top = *std::max_element(v.old_loads.begin(), v.old_loads.end());
    std::optional<MachineIndex> untouched;
    for (MachineIndex i = 0; i < v.game.m; ++i) {
        if (v.old_loads[i] != top) continue;
        bool touched = false;
        for (MachineIndex k = 0; k < v.game.m; ++k) touched = touched || p[i][k] || p[k][i];
        if (touched) return i;
        if (!untouched) untouched = i;
    }
    return *untouched;
}

inline bool is_flower(const std::vector<std::vector<bool>>& p, MachineIndex center) {
    const std::size_t m = p.size();
    for (MachineIndex i = 0; i < m; ++i) {
        if (i == center) continue;
        if (!p[center][i] || !p[i][center]) return false;
        for (MachineIndex k = 0; k < m; ++k) {
            if (k != center && k != i && p[i][k]) return false;
        }
    }
    return true;
}

}  // namespace detail

template <JobInstance Instance>
DeviationStats deviation_stats(const Instance& instance, const Schedule& s, const Schedule& t) {
    validate(instance, s);
    const auto game = detail::scale_instance(instance);
    detail::require_profitable(game, s, t);
    const auto old_loads = game.loads(s.assignment);
    const auto new_loads = game.loads(t.assignment);
    const std::size_t m = game.m;

    DeviationStats stats;
    stats.migration.assign(m, std::vector<bool>(m, false));
    stats.staying_load.assign(m, Rational(0));
    stats.migrating_load.assign(m, std::vector<Rational>(m, Rational(0)));
    for (MachineIndex i = 0; i < m; ++i) {
        stats.old_loads.push_back(game.unscale(old_loads[i]));
        stats.new_loads.push_back(game.unscale(new_loads[i]));
    }
    for (JobIndex j = 0; j < game.n; ++j) {
        if (s[j] != t[j]) {
            stats.improvement.push_back({j, Rational(old_loads[s[j]], new_loads[t[j]])});
            stats.migration[s[j]][t[j]] = true;
            stats.migrating_load[s[j]][t[j]] += instance.processing_time(s[j], j);
        } else {
            stats.staying_load[s[j]] += instance.processing_time(s[j], j);
        }
    }
    for (JobIndex j = 0; j < game.n; ++j) {
        if (s[j] != t[j]) continue;
        const MachineIndex i = s[j];
        if (new_loads[i] < old_loads[i]) {
            stats.improvement.push_back({j, Rational(old_loads[i], new_loads[i])});
        } else if (new_loads[i] > old_loads[i]) {
            stats.damage.push_back({j, Rational(new_loads[i], old_loads[i])});
        }
    }
    return stats;
}

/// IR_min, IR_max and DR_max in one exhaustive pass over all profitable
/// deviations. Witness ties go to the smallest target assignment.
template <JobInstance Instance>
MeasureReport measure_report(const Instance& instance, const Schedule& s,
                             std::uint64_t budget = default_search_budget) {
    MeasureReport report;
    struct Best {
        detail::LoadRatio value{1, 1};
        std::optional<Deviation> witness;
    } best_min, best_max, best_dr;
    auto consider = [](Best& best, detail::LoadRatio value, const detail::DeviationView& view, CoalitionMode mode) {
        if (value > best.value) {
            best.value = value;
            best.witness = detail::make_deviation(view, mode);
        }
    };
    auto result = for_each_profitable_deviation(instance, s, budget, [&](const detail::DeviationView& view) {
        ++report.deviations;
        auto r = detail::leaf_ratios(view);
        consider(best_min, r.ir_min, view, CoalitionMode::migrants_only);
        consider(best_max, r.ir_max, view, CoalitionMode::migrants_plus_improvers);
        consider(best_dr, r.dr_max, view, CoalitionMode::migrants_only);
        return true;
    });
    report.exhaustive = result.end == detail::SearchEnd::exhausted;
    report.nodes = result.nodes;
    auto finish = [&](const Best& best) {
        return MeasureResult{best.value.value(), best.witness, report.exhaustive};
    };
    report.ir_min = finish(best_min);
    report.ir_max = finish(best_max);
    report.dr_max = finish(best_dr);
    return report;
}

template <JobInstance Instance>
MeasureResult ir_min(const Instance& instance, const Schedule& s, std::uint64_t budget = default_search_budget) {
    return measure_report(instance, s, budget).ir_min;
}

template <JobInstance Instance>
MeasureResult ir_max(const Instance& instance, const Schedule& s, std::uint64_t budget = default_search_budget) {
    return measure_report(instance, s, budget).ir_max;
}

template <JobInstance Instance>
MeasureResult dr_max(const Instance& instance, const Schedule& s, std::uint64_t budget = default_search_budget) {
    return measure_report(instance, s, budget).dr_max;
}

/// Whether no coalition can improve every member by more than alpha.
/// Throws BudgetExceeded when the truncated search cannot decide.
template <JobInstance Instance>
bool is_alpha_strong(const Instance& instance, const Schedule& s, const Rational& alpha,
                     std::uint64_t budget = default_search_budget) {
    auto r = ir_min(instance, s, budget);
    if (r.value > alpha) return false;
    if (!r.exhaustive) throw BudgetExceeded("alpha-SE check is inconclusive", budget, 0.0);
    return true;
}

template <JobInstance Instance>
bool check_flower(const Instance& instance, const Schedule& s, const Schedule& t) {
    validate(instance, s);
    const auto game = detail::scale_instance(instance);
    detail::require_profitable(game, s, t);
    const auto old_loads = game.loads(s.assignment);
    const auto new_loads = game.loads(t.assignment);
    detail::DeviationView view{game, s.assignment, t.assignment, old_loads, new_loads};
    auto p = detail::migration_matrix(view);
    return detail::is_flower(p, detail::flower_center(view, p));
}

struct StructuralCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct StructuralReport {
    /// Most loaded machine the flower is centred on.
    MachineIndex center = 0;
    std::vector<StructuralCheck> checks;

    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const StructuralCheck& c) { return c.passed; });
    }
    [[nodiscard]] const StructuralCheck* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

namespace detail {

/// Structural predicates for a deviation out of a Nash equilibrium. The
/// three-machine checks only run when m = 3; the normalized K/H checks also
/// need the start schedule to come from LPT.
inline StructuralReport structural_checks(const DeviationView& v, bool from_lpt) {
    StructuralReport report;
    const std::size_t m = v.game.m;
    auto p = migration_matrix(v);
    auto to_text = [&](std::int64_t scaled) { return v.game.unscale(scaled).to_string(); };

    {
        StructuralCheck c{"receivers_also_send", true, ""};
        for (MachineIndex i = 0; i < m && c.passed; ++i) {
            bool receives = false;
            bool sends = false;
            for (MachineIndex k = 0; k < m; ++k) {
                receives = receives || p[k][i];
                sends = sends || p[i][k];
            }
            if (receives && !sends) {
                c.passed = false;
                c.detail = "machine " + std::to_string(i + 1) + " receives migrants but loses none";
            }
        }
        report.checks.push_back(c);
    }
    {
        std::size_t migrants = 0;
        for (JobIndex j = 0; j < v.game.n; ++j) migrants += v.from[j] != v.to[j] ? 1 : 0;
        report.checks.push_back({"at_least_four_migrants", migrants >= 4, std::to_string(migrants) + " migrants"});
    }

    report.center = flower_center(v, p);
    if (m != 3) return report;

    const MachineIndex c1 = report.center;
    const MachineIndex a = c1 == 0 ? 1 : 0;
    const MachineIndex b = 3 - c1 - a;
    report.checks.push_back({"flower", is_flower(p, c1), "center machine " + std::to_string(c1 + 1)});
    report.checks.push_back({"others_gain_load", v.new_loads[a] > v.old_loads[a] && v.new_loads[b] > v.old_loads[b],
                             "L'=(" + to_text(v.new_loads[0]) + "," + to_text(v.new_loads[1]) + "," +
                                 to_text(v.new_loads[2]) + ")"});
    report.checks.push_back({"center_becomes_lightest",
                             v.new_loads[c1] < std::min(v.new_loads[a], v.new_loads[b]),
                             "L'_center=" + to_text(v.new_loads[c1])});
    std::int64_t total = 0;
    for (std::int64_t l : v.old_loads) total += l;
    report.checks.push_back({"center_at_most_half_total", 2 * v.old_loads[c1] <= total,
                             "L_center=" + to_text(v.old_loads[c1]) + ", total=" + to_text(total)});

    if (!from_lpt) return report;

    // Rescale so the lightest job on the center machine has size 1.
    std::int64_t unit = 0;
    for (JobIndex j = 0; j < v.game.n; ++j) {
        if (v.from[j] != c1) continue;
        const std::int64_t t = v.game.time(j, c1);
        if (unit == 0 || t < unit) unit = t;
    }
    std::vector<std::int64_t> stay(m, 0);
    std::vector<std::int64_t> to_center(m, 0);
    for (JobIndex j = 0; j < v.game.n; ++j) {
        if (v.from[j] == v.to[j]) {
            stay[v.from[j]] += v.game.time(j, v.from[j]);
        } else if (v.to[j] == c1) {
            to_center[v.from[j]] += v.game.time(j, v.from[j]);
        }
    }
    auto normalized = [&](std::int64_t x) { return Rational(x, unit).to_string(); };
    report.checks.push_back({"normalized_inflow_at_least_one", to_center[a] >= unit && to_center[b] >= unit,
                             "H=(" + normalized(to_center[a]) + "," + normalized(to_center[b]) + ")"});
    report.checks.push_back({"normalized_kept_at_least_one", stay[a] >= unit && stay[b] >= unit,
                             "K=(" + normalized(stay[a]) + "," + normalized(stay[b]) + ")"});
    return report;
}

}  // namespace detail

/// Checks the structure every deviation out of a Nash equilibrium must have:
/// receivers also send, at least four migrants, and for three machines the
/// flower shape, load shifts and (from_lpt) the normalized K/H lower bounds.
inline StructuralReport structural_report(const IdenticalInstance& instance, const Schedule& s, const Schedule& t,
                                          bool from_lpt = false) {
    if (!is_nash(instance, s).holds) throw ValidationError("structural report needs a Nash equilibrium start");
    const auto game = detail::scale_instance(instance);
    detail::require_profitable(game, s, t);
    const auto old_loads = game.loads(s.assignment);
    const auto new_loads = game.loads(t.assignment);
    return detail::structural_checks(detail::DeviationView{game, s.assignment, t.assignment, old_loads, new_loads},
                                     from_lpt);
}

}  // namespace strongsched

#endif  // STRONGSCHED_MEASURES_HPP
