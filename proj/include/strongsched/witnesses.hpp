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

#ifndef STRONGSCHED_WITNESSES_HPP
#define STRONGSCHED_WITNESSES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strongsched/core.hpp"
#include "strongsched/equilibria.hpp"
#include "strongsched/measures.hpp"
#include "strongsched/schedulers.hpp"

namespace strongsched {

/// A start schedule together with a known profitable deviation from it.
template <JobInstance Instance>
struct Witness {
    Instance instance;
    Schedule schedule;
    std::optional<Deviation> deviation;
};

namespace detail {

inline Deviation deviation_between(const Schedule& from, const Schedule& to) {
    Deviation d{from, to, {}, {}};
    for (JobIndex j = 0; j < from.size(); ++j) {
        if (from[j] != to[j]) d.migrants.push_back(j);
    }
    d.coalition = d.migrants;
    return d;
}

inline std::vector<Rational> parse_all(std::initializer_list<const char*> texts) {
    std::vector<Rational> out;
    for (const char* t : texts) out.push_back(Rational::parse(t));
    return out;
}

}  // namespace detail

/// Three machines, jobs 5,5,3,2,3,2 in the equilibrium {5,5},{3,2},{3,2}; the
/// 5- and 2-jobs can jointly move to {2,2},{5,3},{5,3}.
inline Witness<IdenticalInstance> figure1() {
    IdenticalInstance instance(3, {5, 5, 3, 2, 3, 2});
    Schedule from{{0, 0, 1, 1, 2, 2}};
    Schedule to{{1, 2, 1, 0, 2, 0}};
    return {instance, from, detail::deviation_between(from, to)};
}

/// Equilibrium {2r,2r},{2r-1,1},{2r-1,1} where the two 1-jobs improve by a
/// factor r. Each machine beyond the third gets one job of size 4r.
inline Witness<IdenticalInstance> figure3(const Rational& r, std::size_t machines = 3) {
    if (r <= Rational(1)) throw ValidationError("figure 3 needs r > 1");
    if (machines < 3) throw ValidationError("figure 3 needs at least three machines");
    const Rational two_r = Rational(2) * r;
    std::vector<Rational> times{two_r, two_r, two_r - Rational(1), Rational(1), two_r - Rational(1), Rational(1)};
    Schedule from{{0, 0, 1, 1, 2, 2}};
    Schedule to{{1, 2, 1, 0, 2, 0}};
    for (MachineIndex i = 3; i < machines; ++i) {
        times.push_back(Rational(4) * r);
        from.assignment.push_back(i);
        to.assignment.push_back(i);
    }
    return {IdenticalInstance(machines, std::move(times)), from, detail::deviation_between(from, to)};
}

/// LPT schedule on three machines whose five migrants all improve by about
/// 1/2 + sqrt(6)/4; the job sizes are that construction rounded to 1e-3.
inline Witness<IdenticalInstance> figure9() {
    IdenticalInstance instance(3, detail::parse_all({"1.633", "1.633", "1.367", "1.266", "1", "1", "1"}));
    Schedule from = lpt(instance);
    // LPT gives {1.633,1,1}, {1.633,1}, {1.367,1.266}.
    Schedule to{{1, 1, 0, 2, 2, 0, 2}};
    return {instance, from, detail::deviation_between(from, to)};
}

/// Two unrelated machines, times [[1, eps], [eps, 1]]; swapping the two
/// jobs improves both by 1/eps.
inline Witness<UnrelatedInstance> footnote5(const Rational& eps) {
    if (eps <= Rational(0) || eps >= Rational(1)) throw ValidationError("eps must lie strictly between 0 and 1");
    UnrelatedInstance instance({{Rational(1), eps}, {eps, Rational(1)}});
    Schedule from{{0, 1}};
    Schedule to{{1, 0}};
    return {instance, from, detail::deviation_between(from, to)};
}

struct ListSchedulingExamples {
    /// Two machines, jobs 1, 1, X in that order.
    IdenticalInstance trapped_instance;
    Schedule trapped_schedule;
    /// The 1-job sharing a machine with X moving next to the other 1-job.
    UnilateralMove trapped_move;
    Rational trapped_ratio;
    /// Three machines, jobs 1-2eps, 1-eps, 1, 2, X, 2, 3 in that order.
    IdenticalInstance damage_instance;
    Schedule damage_schedule;
};

inline ListSchedulingExamples ls_examples(const Rational& x, const Rational& eps) {
    if (x <= Rational(1)) throw ValidationError("X must exceed 1");
    if (eps <= Rational(0) || eps >= Rational(1, 2)) throw ValidationError("eps must lie strictly between 0 and 1/2");

    IdenticalInstance trapped(2, {Rational(1), Rational(1), x});
    std::vector<JobIndex> order{0, 1, 2};
    Schedule trapped_schedule = list_schedule(trapped, order);
    const auto loads = load_profile(trapped, trapped_schedule).loads;
    const MachineIndex heavy = trapped_schedule[2];
    const MachineIndex light = 1 - heavy;
    JobIndex mover = 0;
    while (trapped_schedule[mover] != heavy || mover == 2) ++mover;
    Rational ratio = loads[heavy] / (loads[light] + Rational(1));

    IdenticalInstance damage(3, {Rational(1) - Rational(2) * eps, Rational(1) - eps, Rational(1), Rational(2), x,
                                 Rational(2), Rational(3)});
    std::vector<JobIndex> damage_order(7);
    std::iota(damage_order.begin(), damage_order.end(), JobIndex{0});
    Schedule damage_schedule = list_schedule(damage, damage_order);
    return {trapped, trapped_schedule, UnilateralMove{mover, light}, ratio, damage, damage_schedule};
}

/// Indices of a subset of `values` summing to half the total, if one exists.
inline std::optional<std::vector<std::size_t>> partition_oracle(std::span<const std::int64_t> values) {
    std::int64_t total = 0;
    for (std::int64_t v : values) {
        if (v <= 0) throw ValidationError("partition values must be positive integers");
        total += v;
    }
    if (total % 2 != 0) return std::nullopt;
    const std::int64_t half = total / 2;

    // parent[s]: first item that made sum s reachable.
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(static_cast<std::size_t>(half) + 1, none);
    std::vector<bool> reachable(static_cast<std::size_t>(half) + 1, false);
    reachable[0] = true;
    for (std::size_t item = 0; item < values.size(); ++item) {
        for (std::int64_t s = half; s >= values[item]; --s) {
            const auto su = static_cast<std::size_t>(s);
            const auto prev = static_cast<std::size_t>(s - values[item]);
            if (!reachable[su] && reachable[prev]) {
                reachable[su] = true;
                parent[su] = item;
            }
        }
    }
    if (!reachable[static_cast<std::size_t>(half)]) return std::nullopt;

    std::vector<std::size_t> subset;
    for (std::int64_t s = half; s > 0;) {
        const std::size_t item = parent[static_cast<std::size_t>(s)];
        subset.push_back(item);
        s -= values[item];
    }
    std::sort(subset.begin(), subset.end());
    return subset;
}

/// A Partition set turned into a scheduling instance with an equilibrium
/// that is strong exactly when the set cannot be halved.
template <JobInstance Instance>
struct ReductionArtifact {
    std::vector<std::int64_t> partition_set;
    Instance instance;
    Schedule start_schedule;
    std::optional<bool> expected_se;
    /// Half found by the oracle, as indices into partition_set.
    std::optional<std::vector<std::size_t>> partition;
    /// The deviation the half induces, when there is one.
    std::optional<Deviation> predicted_deviation;
};

namespace detail {

inline std::int64_t checked_half(std::span<const std::int64_t> values) {
    if (values.size() < 2) throw ValidationError("partition set needs at least two numbers");
    std::int64_t total = 0;
    for (std::int64_t v : values) {
        if (v <= 0) throw ValidationError("partition values must be positive integers");
        total += v;
    }
    if (total % 2 != 0) throw ValidationError("partition set total " + std::to_string(total) + " is odd");
    return total / 2;
}

}  // namespace detail

/// Jobs a_1..a_n, B-2, B-2, B-1, B-1 (then one 2B-job per machine beyond the
/// third). Start: every a_i on machine 1, {B-2, B-1} on machines 2 and 3.
inline ReductionArtifact<IdenticalInstance> reduce_partition_identical(std::span<const std::int64_t> values,
                                                                       std::size_t machines = 3) {
    const std::int64_t half = detail::checked_half(values);
    if (*std::min_element(values.begin(), values.end()) < 3) {
        throw ValidationError("identical reduction needs every value to be at least 3");
    }
    if (machines < 3) throw ValidationError("identical reduction needs at least three machines");

    const std::size_t n = values.size();
    std::vector<Rational> times;
    Schedule start;
    for (std::int64_t a : values) {
        times.emplace_back(a);
        start.assignment.push_back(0);
    }
    for (std::int64_t t : {half - 2, half - 2, half - 1, half - 1}) times.emplace_back(t);
    for (MachineIndex i : {1, 2, 1, 2}) start.assignment.push_back(i);
    for (MachineIndex i = 3; i < machines; ++i) {
        times.emplace_back(2 * half);
        start.assignment.push_back(i);
    }

    ReductionArtifact<IdenticalInstance> artifact{std::vector<std::int64_t>(values.begin(), values.end()),
                                                  IdenticalInstance(machines, std::move(times)),
                                                  start,
                                                  std::nullopt,
                                                  partition_oracle(values),
                                                  std::nullopt};
    artifact.expected_se = !artifact.partition.has_value();
    if (artifact.partition) {
        // One half joins a (B-1)-job on machine 2, the other on machine 3; both
        // (B-2)-jobs take machine 1.
        Schedule to = start;
        std::vector<bool> first_half(n, false);
        for (std::size_t k : *artifact.partition) first_half[k] = true;
        for (std::size_t k = 0; k < n; ++k) to[k] = first_half[k] ? 1 : 2;
        to[n] = 0;
        to[n + 1] = 0;
        artifact.predicted_deviation = detail::deviation_between(start, to);
    }
    return artifact;
}

/// Two unrelated machines. Job i (i <= n) takes a_i + eps on machine 1 and
/// 2a_i + eps on machine 2; job n+1 takes B and 2B + n*eps. Start: jobs
/// 1..n on machine 1, job n+1 on machine 2.
inline ReductionArtifact<UnrelatedInstance> reduce_partition_unrelated(std::span<const std::int64_t> values,
                                                                       const Rational& eps) {
    const std::int64_t half = detail::checked_half(values);
    const auto n = static_cast<std::int64_t>(values.size());
    if (eps <= Rational(0) || eps >= Rational(1, n - 1)) {
        throw ValidationError("unrelated reduction needs 0 < eps < 1/(n-1) = 1/" + std::to_string(n - 1));
    }
    std::vector<std::vector<Rational>> matrix(2);
    Schedule start;
    for (std::int64_t a : values) {
        matrix[0].push_back(Rational(a) + eps);
        matrix[1].push_back(Rational(2 * a) + eps);
        start.assignment.push_back(0);
    }
    matrix[0].emplace_back(half);
    matrix[1].push_back(Rational(2 * half) + Rational(n) * eps);
    start.assignment.push_back(1);

    ReductionArtifact<UnrelatedInstance> artifact{std::vector<std::int64_t>(values.begin(), values.end()),
                                                  UnrelatedInstance(std::move(matrix)),
                                                  start,
                                                  std::nullopt,
                                                  partition_oracle(values),
                                                  std::nullopt};
    artifact.expected_se = !artifact.partition.has_value();
    if (artifact.partition) {
        // The oracle's half stays with job n+1 on machine 1; the rest moves.
        Schedule to = start;
        std::vector<bool> first_half(values.size(), false);
        for (std::size_t k : *artifact.partition) first_half[k] = true;
        for (std::size_t k = 0; k < values.size(); ++k) to[k] = first_half[k] ? 0 : 1;
        to[values.size()] = 0;
        artifact.predicted_deviation = detail::deviation_between(start, to);
    }
    return artifact;
}

enum class ExtremalMeasure { ir_max, dr_max };

/// Search space for LPT instances with a large measure: job sizes are
/// base * scale + perturbation for every base and perturbation listed.
struct ExtremalSearchOptions {
    std::int64_t scale = 40;
    std::vector<std::int64_t> bases{1, 2, 3};
    std::vector<std::int64_t> perturbations{0, 1, 2};
    std::size_t max_jobs = 7;
    /// Candidate instances examined before giving up.
    std::uint64_t candidate_budget = 1'000'000;
    std::uint64_t node_budget = default_search_budget;
};

struct ExtremalResult {
    bool found = false;
    std::optional<IdenticalInstance> instance;
    Schedule schedule;
    /// Measure value of the returned instance (or of the best one seen).
    Rational value{1};
    std::optional<Deviation> witness;
    std::uint64_t candidates = 0;
};

/// Enumerates job multisets over the size grid by increasing cardinality and
/// returns the first whose LPT schedule reaches target on the chosen measure.
/// Each hit is re-checked against deviation_stats before it is returned.
inline ExtremalResult search_extremal_lpt(std::size_t machines, ExtremalMeasure measure, const Rational& target,
                                          const ExtremalSearchOptions& options = {}) {
    if (machines < 3) throw ValidationError("extremal search needs at least three machines");

    std::vector<std::int64_t> sizes;
    for (std::int64_t b : options.bases) {
        for (std::int64_t d : options.perturbations) {
            if (b * options.scale + d > 0) sizes.push_back(b * options.scale + d);
        }
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    ExtremalResult best;
    std::vector<std::size_t> pick;

    auto evaluate = [&]() -> bool {
        ++best.candidates;
        std::vector<Rational> times;
        for (std::size_t idx : pick) times.push_back(Rational(sizes[idx], options.scale));
        IdenticalInstance instance(machines, std::move(times));
        Schedule s = lpt(instance);
        auto report = measure_report(instance, s, options.node_budget);
        if (!report.exhaustive) return false;
        const MeasureResult& r = measure == ExtremalMeasure::ir_max ? report.ir_max : report.dr_max;
        if (r.value > best.value || (r.value >= target && !best.found)) {
            best.value = r.value;
            best.instance = instance;
            best.schedule = s;
            best.witness = r.witness;
        }
        if (r.value < target || !r.witness) return false;

        auto stats = deviation_stats(instance, s, r.witness->to);
        Rational recomputed(1);
        if (measure == ExtremalMeasure::ir_max) {
            for (const auto& jr : stats.improvement) recomputed = std::max(recomputed, jr.ratio);
        } else {
            for (const auto& jr : stats.damage) recomputed = std::max(recomputed, jr.ratio);
        }
        if (recomputed != r.value) return false;
        best.found = true;
        return true;
    };

    // Multisets as non-decreasing index sequences into the size list.
    std::function<bool(std::size_t, std::size_t)> extend = [&](std::size_t remaining, std::size_t from) -> bool {
        if (remaining == 0) return evaluate();
        for (std::size_t idx = from; idx < sizes.size(); ++idx) {
            if (best.candidates >= options.candidate_budget) return false;
            pick.push_back(idx);
            bool hit = extend(remaining - 1, idx);
            pick.pop_back();
            if (hit) return true;
        }
        return false;
    };
    for (std::size_t count = machines + 1; count <= options.max_jobs; ++count) {
        if (extend(count, 0)) return best;
        if (best.candidates >= options.candidate_budget) break;
    }
    best.found = false;
    return best;
}

}  // namespace strongsched

#endif  // STRONGSCHED_WITNESSES_HPP
