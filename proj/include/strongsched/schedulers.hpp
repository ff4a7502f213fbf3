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

#ifndef STRONGSCHED_SCHEDULERS_HPP
#define STRONGSCHED_SCHEDULERS_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strongsched/core.hpp"

namespace strongsched {

inline constexpr std::uint64_t default_lex_budget = 10'000'000;
inline constexpr std::uint64_t default_opt_budget = 100'000'000;

/// Machine loads sorted in non-increasing order.
class SortedLoadVector {
  public:
    SortedLoadVector() = default;
    explicit SortedLoadVector(std::vector<Rational> loads) : values_(std::move(loads)) {
        std::sort(values_.begin(), values_.end(), std::greater<>());
    }
    [[nodiscard]] const std::vector<Rational>& values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    friend bool operator==(const SortedLoadVector&, const SortedLoadVector&) = default;

  private:
    std::vector<Rational> values_;
};

inline std::strong_ordering lex_compare(const SortedLoadVector& a, const SortedLoadVector& b) {
    if (a.size() != b.size()) throw ValidationError("cannot compare load vectors of different length");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto c = a.values()[i] <=> b.values()[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

/// Job indices in LPT order: non-increasing time, ties by ascending index.
inline std::vector<JobIndex> lpt_order(const IdenticalInstance& instance) {
    std::vector<JobIndex> order(instance.job_count());
    std::iota(order.begin(), order.end(), JobIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](JobIndex a, JobIndex b) { return instance.time(a) > instance.time(b); });
    return order;
}

namespace detail {

inline MachineIndex least_loaded(std::span<const Rational> loads) {
    MachineIndex best = 0;
    for (MachineIndex i = 1; i < loads.size(); ++i) {
        if (loads[i] < loads[best]) best = i;
    }
    return best;
}

/// Greedy list assignment continuing from the given loads.
inline void assign_greedily(const IdenticalInstance& instance, std::span<const JobIndex> order,
                            std::vector<Rational>& loads, Schedule& schedule) {
    for (JobIndex j : order) {
        MachineIndex target = least_loaded(loads);
        schedule[j] = target;
        loads[target] += instance.time(j);
    }
}

inline void require_permutation(std::span<const JobIndex> order, std::size_t n) {
    if (order.size() != n) throw ValidationError("job order must list every job exactly once");
    std::vector<bool> seen(n, false);
    for (JobIndex j : order) {
        if (j >= n || seen[j]) throw ValidationError("job order is not a permutation");
        seen[j] = true;
    }
}

}  // namespace detail

/// List Scheduling: each job in the given order goes to the currently least
/// loaded machine (lowest index on ties).
inline Schedule list_schedule(const IdenticalInstance& instance, std::span<const JobIndex> order) {
    detail::require_permutation(order, instance.job_count());
    Schedule schedule{std::vector<MachineIndex>(instance.job_count(), 0)};
    std::vector<Rational> loads(instance.machine_count(), Rational(0));
    detail::assign_greedily(instance, order, loads, schedule);
    return schedule;
}

/// Longest Processing Time first.
inline Schedule lpt(const IdenticalInstance& instance) {
    auto order = lpt_order(instance);
    return list_schedule(instance, order);
}

/// Assignment of the k longest jobs whose sorted load vector is
/// lexicographically minimal.
struct PartialAssignment {
    /// Original indices of the k longest jobs, in LPT order.
    std::vector<JobIndex> jobs;
    /// Machine of jobs[t].
    std::vector<MachineIndex> machines;
    SortedLoadVector sorted_loads;
};

inline PartialAssignment lex_min_assignment(const IdenticalInstance& instance, std::size_t k,
                                            std::uint64_t budget = default_lex_budget) {
    if (k > instance.job_count()) {
        throw ValidationError("k = " + std::to_string(k) + " exceeds the number of jobs (" +
                              std::to_string(instance.job_count()) + ")");
    }
    const std::size_t m = instance.machine_count();
    auto order = lpt_order(instance);
    order.resize(k);

    PartialAssignment result;
    result.jobs = order;
    if (k == 0) {
        result.sorted_loads = SortedLoadVector(std::vector<Rational>(m, Rational(0)));
        return result;
    }

    std::vector<Rational> times;
    for (JobIndex j : order) times.push_back(instance.time(j));
    const auto game = detail::scale_instance(IdenticalInstance(m, times));

    auto sorted_desc = [](std::vector<std::int64_t> v) {
        std::sort(v.begin(), v.end(), std::greater<>());
        return v;
    };

    // Seed the bound with the greedy value; the search only needs the value,
    // the winning assignment is always the first minimum met in DFS order.
    std::vector<std::int64_t> best_value;
    {
        std::vector<std::int64_t> loads(m, 0);
        for (std::size_t t = 0; t < k; ++t) {
            auto it = std::min_element(loads.begin(), loads.end());
            *it += game.time(t, 0);
        }
        best_value = sorted_desc(loads);
    }
    std::vector<MachineIndex> best_assignment;
    bool have_best = false;

    std::vector<std::int64_t> loads(m, 0);
    std::vector<MachineIndex> current(k, 0);
    std::uint64_t nodes = 0;

    std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t t, std::size_t used) {
        if (++nodes > budget) {
            throw BudgetExceeded("lexicographically minimal assignment exceeded " + std::to_string(budget) +
                                     " canonical nodes (k = " + std::to_string(k) + ", m = " + std::to_string(m) + ")",
                                 budget, 0.0);
        }
        auto value = sorted_desc(loads);
        if (t == k) {
            if (value < best_value || (value == best_value && !have_best)) {
                best_value = value;
                best_assignment = current;
                have_best = true;
            }
            return;
        }
        // Loads only grow from here, so a partial vector already at the bound
        // ends strictly above it.
        if (value >= best_value) return;
        const std::size_t limit = std::min(used + 1, m);
        for (MachineIndex i = 0; i < limit; ++i) {
            current[t] = i;
            loads[i] += game.time(t, 0);
            visit(t + 1, std::max(used, i + 1));
            loads[i] -= game.time(t, 0);
        }
    };
    visit(0, 0);

    result.machines = best_assignment;
    std::vector<Rational> real_loads(m, Rational(0));
    for (std::size_t t = 0; t < k; ++t) real_loads[best_assignment[t]] += instance.time(order[t]);
    result.sorted_loads = SortedLoadVector(std::move(real_loads));
    return result;
}

struct PtasConfig {
    Rational epsilon{1};
    std::optional<std::size_t> k_override;
    /// Freeze a makespan machine that holds only long jobs and rerun on the rest.
    bool refine = false;
    std::uint64_t budget = default_lex_budget;
};

/// Number of long jobs the scheme enumerates: ceil(m / epsilon) unless overridden.
inline std::size_t ptas_k(std::size_t machines, const PtasConfig& config) {
    if (config.epsilon <= Rational(0)) throw ValidationError("epsilon must be positive");
    if (config.k_override) {
        if (*config.k_override == 0) throw ValidationError("k must be positive");
        return *config.k_override;
    }
    return static_cast<std::size_t>((Rational(static_cast<std::int64_t>(machines)) / config.epsilon).ceil());
}

struct PtasOutcome {
    Schedule schedule;
    std::size_t k = 0;
    /// Jobs placed by the lexicographic step rather than the greedy step.
    std::vector<bool> long_job;
    /// Machines fixed by the refinement loop, in freezing order.
    std::vector<MachineIndex> frozen;
};

namespace detail {

inline PtasOutcome run_ptas_once(const IdenticalInstance& instance, std::size_t k, std::uint64_t budget) {
    const std::size_t n = instance.job_count();
    const std::size_t m = instance.machine_count();
    k = std::min(k, n);

    // m^k with saturation, checked against the budget before any search.
    std::uint64_t space = 1;
    for (std::size_t t = 0; t < k && space <= budget; ++t) {
        space = space > std::numeric_limits<std::uint64_t>::max() / m ? std::numeric_limits<std::uint64_t>::max()
                                                                      : space * m;
    }
    if (space > budget) {
        throw BudgetExceeded("m^k = " + std::to_string(m) + "^" + std::to_string(k) + " exceeds the search budget of " +
                                 std::to_string(budget),
                             budget, 0.0);
    }

    auto prefix = lex_min_assignment(instance, k, budget);
    PtasOutcome out;
    out.k = k;
    out.schedule.assignment.assign(n, 0);
    out.long_job.assign(n, false);
    std::vector<Rational> loads(m, Rational(0));
    for (std::size_t t = 0; t < k; ++t) {
        out.schedule[prefix.jobs[t]] = prefix.machines[t];
        out.long_job[prefix.jobs[t]] = true;
        loads[prefix.machines[t]] += instance.time(prefix.jobs[t]);
    }
    auto order = lpt_order(instance);
    std::span<const JobIndex> rest(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    assign_greedily(instance, rest, loads, out.schedule);
    return out;
}

}  // namespace detail

/// Lexicographically minimal placement of the k longest jobs followed by LPT
/// on the rest. With refine set, a makespan machine carrying only long jobs
/// is frozen and the scheme reruns on the remaining machines, at most m-1 times.
inline PtasOutcome ptas_detailed(const IdenticalInstance& instance, const PtasConfig& config) {
    const std::size_t k = ptas_k(instance.machine_count(), config);
    if (!config.refine) return detail::run_ptas_once(instance, k, config.budget);

    const std::size_t n = instance.job_count();
    PtasOutcome result;
    result.k = std::min(k, n);
    result.schedule.assignment.assign(n, 0);
    result.long_job.assign(n, false);

    std::vector<JobIndex> jobs(n);
    std::iota(jobs.begin(), jobs.end(), JobIndex{0});
    std::vector<MachineIndex> machines(instance.machine_count());
    std::iota(machines.begin(), machines.end(), MachineIndex{0});

    while (true) {
        std::vector<Rational> times;
        for (JobIndex j : jobs) times.push_back(instance.time(j));
        IdenticalInstance sub(machines.size(), times);
        auto run = detail::run_ptas_once(sub, k, config.budget);
        auto write_back = [&](auto&& keep) {
            for (std::size_t t = 0; t < jobs.size(); ++t) {
                if (!keep(t)) continue;
                result.schedule[jobs[t]] = machines[run.schedule[t]];
                result.long_job[jobs[t]] = run.long_job[t];
            }
        };
        if (machines.size() == 1) {
            write_back([](std::size_t) { return true; });
            break;
        }

        auto profile = load_profile(sub, run.schedule);
        std::optional<MachineIndex> frozen;
        for (MachineIndex i = 0; i < machines.size() && !frozen; ++i) {
            if (profile.loads[i] != profile.makespan) continue;
            bool only_long = true;
            bool any = false;
            for (std::size_t t = 0; t < jobs.size(); ++t) {
                if (run.schedule[t] != i) continue;
                any = true;
                only_long = only_long && run.long_job[t];
            }
            if (any && only_long) frozen = i;
        }
        if (!frozen) {
            write_back([](std::size_t) { return true; });
            break;
        }

        write_back([&](std::size_t t) { return run.schedule[t] == *frozen; });
        result.frozen.push_back(machines[*frozen]);
        std::vector<JobIndex> remaining;
        for (std::size_t t = 0; t < jobs.size(); ++t) {
            if (run.schedule[t] != *frozen) remaining.push_back(jobs[t]);
        }
        jobs = std::move(remaining);
        machines.erase(machines.begin() + static_cast<std::ptrdiff_t>(*frozen));
    }
    return result;
}

inline Schedule ptas(const IdenticalInstance& instance, const PtasConfig& config) {
    return ptas_detailed(instance, config).schedule;
}

struct OptimalMakespan {
    Rational makespan;
    Schedule witness;
};

/// Budget ran out before optimality was proven; carries the best schedule found.
class OptimalBudgetExceeded : public BudgetExceeded {
  public:
    OptimalBudgetExceeded(const std::string& what, std::uint64_t budget, OptimalMakespan best)
        : BudgetExceeded(what, budget, 0.0), best_(std::move(best)) {}
    [[nodiscard]] const OptimalMakespan& best() const { return best_; }

  private:
    OptimalMakespan best_;
};

/// Exact minimum makespan by branch and bound over canonical assignments.
inline OptimalMakespan optimal_makespan(const IdenticalInstance& instance,
                                        std::uint64_t budget = default_opt_budget) {
    const std::size_t n = instance.job_count();
    const std::size_t m = instance.machine_count();
    Schedule start = lpt(instance);
    OptimalMakespan best{load_profile(instance, start).makespan, start};
    if (n == 0) return best;

    auto order = lpt_order(instance);
    std::vector<Rational> sorted_times;
    for (JobIndex j : order) sorted_times.push_back(instance.time(j));
    const auto game = detail::scale_instance(IdenticalInstance(m, sorted_times));

    std::int64_t total = 0;
    for (std::size_t t = 0; t < n; ++t) total += game.time(t, 0);
    const std::int64_t per_machine = (total + static_cast<std::int64_t>(m) - 1) / static_cast<std::int64_t>(m);
    const std::int64_t lower = std::max(game.time(0, 0), per_machine);

    std::int64_t best_scaled = (best.makespan * Rational(game.scale)).num();
    if (best_scaled == lower) return best;

    std::vector<std::int64_t> loads(m, 0);
    std::vector<MachineIndex> current(n, 0);
    std::vector<MachineIndex> best_sorted;
    std::uint64_t nodes = 0;
    bool done = false;

    std::function<void(std::size_t, std::size_t, std::int64_t)> visit = [&](std::size_t t, std::size_t used,
                                                                            std::int64_t peak) {
        if (done) return;
        if (++nodes > budget) {
            Schedule witness{std::vector<MachineIndex>(n, 0)};
            if (best_sorted.empty()) {
                witness = start;
            } else {
                for (std::size_t s = 0; s < n; ++s) witness[order[s]] = best_sorted[s];
            }
            throw OptimalBudgetExceeded("optimal makespan search exceeded " + std::to_string(budget) +
                                            " nodes; best makespan found " + game.unscale(best_scaled).to_string(),
                                        budget, OptimalMakespan{game.unscale(best_scaled), witness});
        }
        if (t == n) {
            if (peak < best_scaled) {
                best_scaled = peak;
                best_sorted = current;
                done = best_scaled == lower;
            }
            return;
        }
        const std::size_t limit = std::min(used + 1, m);
        for (MachineIndex i = 0; i < limit && !done; ++i) {
            // Machines with equal load are interchangeable for the rest of the search.
            bool repeat = false;
            for (MachineIndex q = 0; q < i; ++q) repeat = repeat || loads[q] == loads[i];
            if (repeat) continue;
            const std::int64_t next = loads[i] + game.time(t, 0);
            if (next >= best_scaled) continue;
            current[t] = i;
            loads[i] = next;
            visit(t + 1, std::max(used, i + 1), std::max(peak, next));
            loads[i] -= game.time(t, 0);
        }
    };
    visit(0, 0, 0);

    if (!best_sorted.empty()) {
        Schedule witness{std::vector<MachineIndex>(n, 0)};
        for (std::size_t s = 0; s < n; ++s) witness[order[s]] = best_sorted[s];
        best = OptimalMakespan{game.unscale(best_scaled), witness};
    }
    return best;
}

}  // namespace strongsched

#endif  // STRONGSCHED_SCHEDULERS_HPP
