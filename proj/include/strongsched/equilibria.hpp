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

#ifndef STRONGSCHED_EQUILIBRIA_HPP
#define STRONGSCHED_EQUILIBRIA_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strongsched/core.hpp"

namespace strongsched {

inline constexpr std::uint64_t default_search_budget = 100'000'000;

/// Which non-migrating jobs count as coalition members.
enum class CoalitionMode {
    migrants_only,
    /// Migrants plus every staying job whose machine got strictly lighter.
    migrants_plus_improvers,
};

enum class Objective { any, maximize_ir_min, maximize_ir_max, maximize_dr_max };

struct SearchOptions {
    std::uint64_t node_budget = default_search_budget;
    CoalitionMode coalition_mode = CoalitionMode::migrants_only;
    Objective objective = Objective::any;
};

/// A joint move from one schedule to another in which every coalition
/// member strictly lowers its cost and everyone else stays put.
struct Deviation {
    Schedule from;
    Schedule to;
    std::vector<JobIndex> migrants;
    std::vector<JobIndex> coalition;

    friend bool operator==(const Deviation&, const Deviation&) = default;
};

struct UnilateralMove {
    JobIndex job = 0;
    MachineIndex target = 0;
    friend bool operator==(const UnilateralMove&, const UnilateralMove&) = default;
};

struct NashCheck {
    bool holds = true;
    std::optional<UnilateralMove> witness;
};

struct StrongCheck {
    bool holds = true;
    std::optional<Deviation> witness;
};

/// Every profitable deviation the search met, in increasing order of the
/// target assignment vector.
struct DeviationStream {
    std::vector<Deviation> deviations;
    /// Stopped at the caller's limit or the node budget; the list may be incomplete.
    bool truncated = false;
    /// The node budget, not the limit, ended the search.
    bool budget_exhausted = false;
};

template <JobInstance Instance>
NashCheck is_nash(const Instance& instance, const Schedule& schedule) {
    validate(instance, schedule);
    const auto game = detail::scale_instance(instance);
    const auto loads = game.loads(schedule.assignment);
    for (JobIndex j = 0; j < game.n; ++j) {
        for (MachineIndex i = 0; i < game.m; ++i) {
            if (i == schedule[j]) continue;
            if (loads[i] + game.time(j, i) < loads[schedule[j]]) {
                return NashCheck{false, UnilateralMove{j, i}};
            }
        }
    }
    return NashCheck{};
}

namespace detail {

/// Exact ratio a/b of two positive scaled loads.
struct LoadRatio {
    std::int64_t num = 1;
    std::int64_t den = 1;

    [[nodiscard]] Rational value() const { return Rational(num, den); }
    friend bool operator<(const LoadRatio& a, const LoadRatio& b) {
        return static_cast<wide_int>(a.num) * b.den < static_cast<wide_int>(b.num) * a.den;
    }
    friend bool operator>(const LoadRatio& a, const LoadRatio& b) { return b < a; }
};

/// A leaf of the deviation search: the target assignment and both load vectors.
struct DeviationView {
    const ScaledGame& game;
    std::span<const MachineIndex> from;
    std::span<const MachineIndex> to;
    std::span<const std::int64_t> old_loads;
    std::span<const std::int64_t> new_loads;
};

enum class SearchEnd { exhausted, stopped, budget };

struct SearchResult {
    SearchEnd end = SearchEnd::exhausted;
    std::uint64_t nodes = 0;
    double explored = 1.0;
};

/// Depth-first search over the target assignments of the free jobs, in
/// lexicographic order of the full assignment vector. A branch dies as soon
/// as the partial load on some machine reaches the cost a migrant onto it
/// had before (loads only grow as jobs are placed). With members_improve
/// set, free jobs that stay must also end on a strictly lighter machine.
class DeviationSearch {
  public:
    DeviationSearch(const ScaledGame& game, std::span<const MachineIndex> from, std::vector<bool> free,
                    bool members_improve, std::uint64_t budget)
        : game_(game),
          from_(from),
          free_(std::move(free)),
          members_improve_(members_improve),
          budget_(budget),
          old_loads_(game.loads(from)),
          loads_(game.m, 0),
          caps_(game.m, std::numeric_limits<std::int64_t>::max()),
          to_(from.begin(), from.end()) {
        for (JobIndex j = 0; j < game.n; ++j) {
            if (!free_[j]) loads_[from[j]] += game.time(j, from[j]);
        }
        for (JobIndex j = 0; j < game.n; ++j) {
            if (free_[j]) free_jobs_.push_back(j);
        }
    }

    template <typename Visitor>
    SearchResult run(Visitor&& visit) {
        result_ = SearchResult{};
        result_.explored = 0.0;
        bool go_on = descend(0, 1.0, visit);
        if (result_.end == SearchEnd::exhausted) result_.explored = 1.0;
        (void)go_on;
        return result_;
    }

    [[nodiscard]] std::span<const std::int64_t> old_loads() const { return old_loads_; }

  private:
    template <typename Visitor>
    bool descend(std::size_t depth, double weight, Visitor& visit) {
        if (depth == free_jobs_.size()) {
            result_.explored += weight;
            if (migrants_ == 0) return true;
            DeviationView view{game_, from_, to_, old_loads_, loads_};
            if (!visit(view)) {
                result_.end = SearchEnd::stopped;
                return false;
            }
            return true;
        }
        const JobIndex j = free_jobs_[depth];
        const double child_weight = weight / static_cast<double>(game_.m);
        for (MachineIndex i = 0; i < game_.m; ++i) {
            if (++result_.nodes > budget_) {
                result_.end = SearchEnd::budget;
                return false;
            }
            const bool migrates = i != from_[j];
            std::int64_t cap = caps_[i];
            if (migrates || members_improve_) cap = std::min(cap, old_loads_[from_[j]]);
            const std::int64_t next = loads_[i] + game_.time(j, i);
            if (next >= cap) {
                result_.explored += child_weight;
                continue;
            }
            const std::int64_t saved_cap = caps_[i];
            caps_[i] = cap;
            loads_[i] = next;
            to_[j] = i;
            migrants_ += migrates ? 1 : 0;
            bool go_on = descend(depth + 1, child_weight, visit);
            migrants_ -= migrates ? 1 : 0;
            to_[j] = from_[j];
            loads_[i] -= game_.time(j, i);
            caps_[i] = saved_cap;
            if (!go_on) return false;
        }
        return true;
    }

    const ScaledGame& game_;
    std::span<const MachineIndex> from_;
    std::vector<bool> free_;
    bool members_improve_;
    std::uint64_t budget_;
    std::vector<std::int64_t> old_loads_;
    std::vector<std::int64_t> loads_;
    std::vector<std::int64_t> caps_;
    std::vector<MachineIndex> to_;
    std::vector<JobIndex> free_jobs_;
    std::size_t migrants_ = 0;
    SearchResult result_;
};

inline Deviation make_deviation(const DeviationView& view, CoalitionMode mode) {
    Deviation d;
    d.from.assignment.assign(view.from.begin(), view.from.end());
    d.to.assignment.assign(view.to.begin(), view.to.end());
    for (JobIndex j = 0; j < view.game.n; ++j) {
        const bool migrates = view.from[j] != view.to[j];
        if (migrates) d.migrants.push_back(j);
        const MachineIndex i = view.from[j];
        if (migrates ||
            (mode == CoalitionMode::migrants_plus_improvers && view.new_loads[i] < view.old_loads[i])) {
            d.coalition.push_back(j);
        }
    }
    return d;
}

/// Per-deviation extremes: the coalition's smallest and largest improvement
/// and the worst damage to a staying outsider (1/1 when nobody is damaged).
struct LeafRatios {
    LoadRatio ir_min;
    LoadRatio ir_max;
    LoadRatio dr_max;
};

inline LeafRatios leaf_ratios(const DeviationView& v) {
    LeafRatios r;
    bool first = true;
    std::vector<bool> has_stayer(v.game.m, false);
    for (JobIndex j = 0; j < v.game.n; ++j) {
        if (v.from[j] == v.to[j]) {
            has_stayer[v.from[j]] = true;
            continue;
        }
        LoadRatio ir{v.old_loads[v.from[j]], v.new_loads[v.to[j]]};
        if (first) {
            r.ir_min = ir;
            r.ir_max = ir;
            first = false;
        } else {
            if (ir < r.ir_min) r.ir_min = ir;
            if (ir > r.ir_max) r.ir_max = ir;
        }
    }
    for (MachineIndex i = 0; i < v.game.m; ++i) {
        if (!has_stayer[i]) continue;
        if (v.new_loads[i] < v.old_loads[i]) {
            LoadRatio ir{v.old_loads[i], v.new_loads[i]};
            if (ir > r.ir_max) r.ir_max = ir;
        } else if (v.new_loads[i] > v.old_loads[i]) {
            LoadRatio dr{v.new_loads[i], v.old_loads[i]};
            if (dr > r.dr_max) r.dr_max = dr;
        }
    }
    return r;
}

[[noreturn]] inline void throw_budget(const std::string& what, std::uint64_t budget, const SearchResult& result) {
    throw BudgetExceeded(what + " exceeded the node budget of " + std::to_string(budget) + " after exploring " +
                             std::to_string(result.explored * 100.0) + "% of the search space",
                         budget, result.explored);
}

}  // namespace detail

/// Calls visit(view) for every profitable deviation (migrants-only coalition)
/// in lexicographic order of the target assignment. visit returns false to stop.
template <JobInstance Instance, typename Visitor>
detail::SearchResult for_each_profitable_deviation(const Instance& instance, const Schedule& schedule,
                                                   std::uint64_t budget, Visitor&& visit) {
    validate(instance, schedule);
    const auto game = detail::scale_instance(instance);
    detail::DeviationSearch search(game, schedule.assignment, std::vector<bool>(game.n, true), false, budget);
    return search.run(visit);
}

/// Finds a deviation from schedule in which every migrating job strictly
/// improves. With Objective::any this is the lexicographically smallest
/// target assignment; otherwise the one maximizing the chosen measure (ties
/// to the smallest assignment). Throws BudgetExceeded when inconclusive.
template <JobInstance Instance>
std::optional<Deviation> find_profitable_deviation(const Instance& instance, const Schedule& schedule,
                                                   const SearchOptions& options = {}) {
    validate(instance, schedule);
    const auto game = detail::scale_instance(instance);
    detail::DeviationSearch search(game, schedule.assignment, std::vector<bool>(game.n, true), false,
                                   options.node_budget);
    std::optional<Deviation> best;
    detail::LoadRatio best_value{0, 1};
    auto result = search.run([&](const detail::DeviationView& view) {
        if (options.objective == Objective::any) {
            best = detail::make_deviation(view, options.coalition_mode);
            return false;
        }
        auto ratios = detail::leaf_ratios(view);
        const detail::LoadRatio value = options.objective == Objective::maximize_ir_min   ? ratios.ir_min
                                        : options.objective == Objective::maximize_ir_max ? ratios.ir_max
                                                                                          : ratios.dr_max;
        if (!best || value > best_value) {
            best = detail::make_deviation(view, options.coalition_mode);
            best_value = value;
        }
        return true;
    });
    if (result.end == detail::SearchEnd::budget) detail::throw_budget("deviation search", options.node_budget, result);
    return best;
}

template <JobInstance Instance>
StrongCheck is_strong(const Instance& instance, const Schedule& schedule,
                      std::uint64_t budget = default_search_budget) {
    SearchOptions options;
    options.node_budget = budget;
    auto witness = find_profitable_deviation(instance, schedule, options);
    return StrongCheck{!witness.has_value(), std::move(witness)};
}

/// Searches the joint moves of exactly the given coalition, everyone else
/// fixed, for one where every member (moving or not) strictly improves.
template <JobInstance Instance>
std::optional<Deviation> can_coalition_deviate(const Instance& instance, const Schedule& schedule,
                                               std::span<const JobIndex> coalition,
                                               std::uint64_t budget = default_search_budget) {
    validate(instance, schedule);
    const auto game = detail::scale_instance(instance);
    std::vector<bool> free(game.n, false);
    for (JobIndex j : coalition) {
        if (j >= game.n) throw ValidationError("coalition member " + std::to_string(j + 1) + " does not exist");
        free[j] = true;
    }
    detail::DeviationSearch search(game, schedule.assignment, free, true, budget);
    std::optional<Deviation> found;
    auto result = search.run([&](const detail::DeviationView& view) {
        found = detail::make_deviation(view, CoalitionMode::migrants_only);
        found->coalition.clear();
        for (JobIndex j = 0; j < game.n; ++j) {
            if (free[j]) found->coalition.push_back(j);
        }
        return false;
    });
    if (result.end == detail::SearchEnd::budget) detail::throw_budget("coalition search", budget, result);
    return found;
}

/// Every profitable deviation with a migrants-only coalition, up to limit.
template <JobInstance Instance>
DeviationStream enumerate_profitable_deviations(const Instance& instance, const Schedule& schedule,
                                                std::size_t limit = std::numeric_limits<std::size_t>::max(),
                                                std::uint64_t budget = default_search_budget) {
    DeviationStream stream;
    if (limit == 0) {
        stream.truncated = true;
        return stream;
    }
    auto result = for_each_profitable_deviation(instance, schedule, budget, [&](const detail::DeviationView& view) {
        stream.deviations.push_back(detail::make_deviation(view, CoalitionMode::migrants_only));
        return stream.deviations.size() < limit;
    });
    stream.budget_exhausted = result.end == detail::SearchEnd::budget;
    stream.truncated = result.end != detail::SearchEnd::exhausted;
    return stream;
}

}  // namespace strongsched

#endif  // STRONGSCHED_EQUILIBRIA_HPP
