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

#ifndef STRONGSCHED_ERRORS_HPP
#define STRONGSCHED_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace strongsched {

/// Malformed input: bad schedule, out-of-range index, violated precondition.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// An exhaustive search hit its node budget before finishing. The result is
/// inconclusive; it must never be read as "no deviation exists".
class BudgetExceeded : public std::runtime_error {
  public:
    BudgetExceeded(const std::string& what, std::uint64_t budget, double explored_fraction)
        : std::runtime_error(what), budget_(budget), explored_(explored_fraction) {}

    [[nodiscard]] std::uint64_t budget() const { return budget_; }
    /// Share of the search space that was covered before giving up, in [0, 1].
    [[nodiscard]] double explored_fraction() const { return explored_; }

  private:
    std::uint64_t budget_;
    double explored_;
};

}  // namespace strongsched

#endif  // STRONGSCHED_ERRORS_HPP
