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

#ifndef STRONGSCHED_CORE_HPP
#define STRONGSCHED_CORE_HPP

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strongsched/errors.hpp"
#include "strongsched/rational.hpp"

namespace strongsched {

// Indices are 0-based in the C++ API. File formats and the CLI use 1-based
// machine and job numbers; the io layer translates.
using JobIndex = std::size_t;
using MachineIndex = std::size_t;

/// Jobs on identical machines: a job costs the same everywhere.
class IdenticalInstance {
  public:
    IdenticalInstance(std::size_t machines, std::vector<Rational> times) : m_(machines), p_(std::move(times)) {
        if (m_ == 0) throw ValidationError("instance needs at least one machine");
        for (std::size_t j = 0; j < p_.size(); ++j) {
            if (p_[j] <= Rational(0)) {
                throw ValidationError("processing time of job " + std::to_string(j + 1) + " must be positive");
            }
        }
    }

    [[nodiscard]] std::size_t machine_count() const { return m_; }
    [[nodiscard]] std::size_t job_count() const { return p_.size(); }
    [[nodiscard]] const Rational& time(JobIndex job) const { return p_.at(job); }
    [[nodiscard]] const Rational& processing_time(MachineIndex /*machine*/, JobIndex job) const { return p_[job]; }
    [[nodiscard]] std::span<const Rational> times() const { return p_; }

    [[nodiscard]] Rational total_time() const {
        return std::accumulate(p_.begin(), p_.end(), Rational(0));
    }

    friend bool operator==(const IdenticalInstance&, const IdenticalInstance&) = default;

  private:
    std::size_t m_;
    std::vector<Rational> p_;
};

/// Jobs on unrelated machines. Row i of the matrix holds the times on machine i.
class UnrelatedInstance {
  public:
    explicit UnrelatedInstance(std::vector<std::vector<Rational>> matrix) : rows_(std::move(matrix)) {
        if (rows_.empty()) throw ValidationError("instance needs at least one machine");
        const std::size_t n = rows_.front().size();
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].size() != n) throw ValidationError("processing-time matrix is not rectangular");
            for (const Rational& v : rows_[i]) {
                if (v <= Rational(0)) throw ValidationError("processing times must be positive");
            }
        }
    }

    [[nodiscard]] std::size_t machine_count() const { return rows_.size(); }
    [[nodiscard]] std::size_t job_count() const { return rows_.front().size(); }
    [[nodiscard]] const Rational& processing_time(MachineIndex machine, JobIndex job) const {
        return rows_[machine][job];
    }
    [[nodiscard]] const std::vector<std::vector<Rational>>& matrix() const { return rows_; }

    friend bool operator==(const UnrelatedInstance&, const UnrelatedInstance&) = default;

  private:
    std::vector<std::vector<Rational>> rows_;
};

template <typename T>
concept JobInstance = requires(const T& inst, MachineIndex i, JobIndex j) {
    { inst.machine_count() } -> std::convertible_to<std::size_t>;
    { inst.job_count() } -> std::convertible_to<std::size_t>;
    { inst.processing_time(i, j) } -> std::convertible_to<Rational>;
};

/// Machine chosen by every job, indexed by job.
struct Schedule {
    std::vector<MachineIndex> assignment;

    [[nodiscard]] std::size_t size() const { return assignment.size(); }
    MachineIndex operator[](JobIndex j) const { return assignment[j]; }
    MachineIndex& operator[](JobIndex j) { return assignment[j]; }

    friend bool operator==(const Schedule&, const Schedule&) = default;
    friend auto operator<=>(const Schedule&, const Schedule&) = default;
};

struct LoadProfile {
    std::vector<Rational> loads;
    Rational makespan;
};

template <JobInstance Instance>
void validate(const Instance& instance, const Schedule& schedule) {
    if (schedule.size() != instance.job_count()) {
        throw ValidationError("schedule assigns " + std::to_string(schedule.size()) + " jobs but the instance has " +
                              std::to_string(instance.job_count()));
    }
    for (JobIndex j = 0; j < schedule.size(); ++j) {
        if (schedule[j] >= instance.machine_count()) {
            throw ValidationError("job " + std::to_string(j + 1) + " is assigned to machine " +
                                  std::to_string(schedule[j] + 1) + " but there are only " +
                                  std::to_string(instance.machine_count()) + " machines");
        }
    }
}

template <JobInstance Instance>
LoadProfile load_profile(const Instance& instance, const Schedule& schedule) {
    validate(instance, schedule);
    LoadProfile profile;
    profile.loads.assign(instance.machine_count(), Rational(0));
    for (JobIndex j = 0; j < schedule.size(); ++j) {
        profile.loads[schedule[j]] += instance.processing_time(schedule[j], j);
    }
    profile.makespan = *std::max_element(profile.loads.begin(), profile.loads.end());
    return profile;
}

/// Cost of a job: the load of the machine it sits on.
template <JobInstance Instance>
Rational job_cost(const Instance& instance, const Schedule& schedule, JobIndex job) {
    validate(instance, schedule);
    if (job >= instance.job_count()) {
        throw ValidationError("job " + std::to_string(job + 1) + " does not exist");
    }
    Rational load(0);
    for (JobIndex j = 0; j < schedule.size(); ++j) {
        if (schedule[j] == schedule[job]) load += instance.processing_time(schedule[j], j);
    }
    return load;
}

/// Sub-instance formed by a set of machines and exactly the jobs they hold.
struct InducedInstance {
    IdenticalInstance instance;
    /// Sub-instance job index -> original job index (increasing).
    std::vector<JobIndex> job_map;
    /// Sub-instance machine index -> original machine index (increasing).
    std::vector<MachineIndex> machine_map;
    /// The original assignment restricted to the sub-instance.
    Schedule schedule;
};

inline InducedInstance induced_instance(const IdenticalInstance& instance, const Schedule& schedule,
                                        std::span<const MachineIndex> machine_subset) {
    validate(instance, schedule);
    if (machine_subset.empty()) throw ValidationError("machine subset must be nonempty");

    std::vector<MachineIndex> machines(machine_subset.begin(), machine_subset.end());
    std::sort(machines.begin(), machines.end());
    machines.erase(std::unique(machines.begin(), machines.end()), machines.end());
    std::vector<std::size_t> local(instance.machine_count(), std::numeric_limits<std::size_t>::max());
    for (std::size_t k = 0; k < machines.size(); ++k) {
        if (machines[k] >= instance.machine_count()) {
            throw ValidationError("machine " + std::to_string(machines[k] + 1) + " does not exist");
        }
        local[machines[k]] = k;
    }

    std::vector<Rational> times;
    std::vector<JobIndex> job_map;
    Schedule sub;
    for (JobIndex j = 0; j < instance.job_count(); ++j) {
        if (local[schedule[j]] == std::numeric_limits<std::size_t>::max()) continue;
        times.push_back(instance.time(j));
        job_map.push_back(j);
        sub.assignment.push_back(local[schedule[j]]);
    }
    return InducedInstance{IdenticalInstance(machines.size(), std::move(times)), std::move(job_map),
                           std::move(machines), std::move(sub)};
}

/// Relabels identical machines so that machines appear in order of their
/// first job. Idempotent; loads and job costs are unchanged up to relabeling.
inline Schedule canonical_form(const Schedule& schedule, const IdenticalInstance& instance) {
    validate(instance, schedule);
    constexpr auto unset = std::numeric_limits<MachineIndex>::max();
    std::vector<MachineIndex> relabel(instance.machine_count(), unset);
    MachineIndex next = 0;
    Schedule out;
    out.assignment.reserve(schedule.size());
    for (MachineIndex machine : schedule.assignment) {
        if (relabel[machine] == unset) relabel[machine] = next++;
        out.assignment.push_back(relabel[machine]);
    }
    return out;
}

namespace detail {

/// Integer view of an instance: every processing time multiplied by the
/// common denominator of all of them. Ratios of scaled loads equal ratios
/// of true loads, so all equilibrium arithmetic stays exact in int64.
struct ScaledGame {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<std::int64_t> p;  // p[job * m + machine]
    std::int64_t scale = 1;

    [[nodiscard]] std::int64_t time(JobIndex job, MachineIndex machine) const { return p[job * m + machine]; }
    [[nodiscard]] Rational unscale(std::int64_t value) const { return Rational(value, scale); }

    [[nodiscard]] std::vector<std::int64_t> loads(std::span<const MachineIndex> assignment) const {
        std::vector<std::int64_t> out(m, 0);
        for (JobIndex j = 0; j < n; ++j) out[assignment[j]] += time(j, assignment[j]);
        return out;
    }
};

template <JobInstance Instance>
ScaledGame scale_instance(const Instance& instance) {
    ScaledGame g;
    g.m = instance.machine_count();
    g.n = instance.job_count();
    wide_int scale = 1;
    for (JobIndex j = 0; j < g.n; ++j) {
        for (MachineIndex i = 0; i < g.m; ++i) {
            const Rational& v = instance.processing_time(i, j);
            wide_int d = v.den();
            scale = scale / wide_gcd(scale, d) * d;
            narrow_checked(scale);
        }
    }
    g.scale = narrow_checked(scale);
    g.p.resize(g.n * g.m);
    wide_int total = 0;
    for (JobIndex j = 0; j < g.n; ++j) {
        for (MachineIndex i = 0; i < g.m; ++i) {
            const Rational& v = instance.processing_time(i, j);
            wide_int scaled = static_cast<wide_int>(v.num()) * (scale / v.den());
            g.p[j * g.m + i] = narrow_checked(scaled);
            total += scaled;
        }
    }
    // Loads are sums of these; keep headroom so cross products fit in 128 bits.
    if (total > (wide_int{1} << 62)) throw std::overflow_error("strongsched: instance too large for exact search");
    return g;
}

}  // namespace detail

}  // namespace strongsched

#endif  // STRONGSCHED_CORE_HPP
