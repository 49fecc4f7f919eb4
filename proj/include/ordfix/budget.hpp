// Copyright 2026 The ordfix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORDFIX_BUDGET_HPP
#define ORDFIX_BUDGET_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace ordfix {

enum class BudgetKind : std::uint8_t { Time, Memory };

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(BudgetKind kind)
      : std::runtime_error(kind == BudgetKind::Time ? "time limit exceeded"
                                                    : "memory limit exceeded"),
        kind_(kind) {}
  BudgetKind kind() const { return kind_; }

 private:
  BudgetKind kind_;
};

/// Cooperative resource accounting for one fix job. Time is polled every
/// `check_interval` ticks; memory is an internal byte count charged by the
/// edge and memo stores, not the process footprint.
class Budget {
 public:
  using Clock = std::chrono::steady_clock;

  Budget(std::chrono::duration<double> time_limit, std::size_t memory_limit,
         std::uint32_t check_interval = 4096)
      : deadline_(Clock::now() +
                  std::chrono::duration_cast<Clock::duration>(time_limit)),
        memory_limit_(memory_limit),
        interval_(check_interval == 0 ? 1 : check_interval) {}

  /// Unlimited budget.
  Budget() : Budget(std::chrono::hours(24 * 365), SIZE_MAX) {}

  void tick() {
    if (++ticks_ % interval_ == 0) check_time();
  }
  void check_time() const {
    if (Clock::now() > deadline_) throw BudgetExceeded(BudgetKind::Time);
  }
  void charge(std::size_t bytes) {
    used_ += bytes;
    if (used_ > memory_limit_) throw BudgetExceeded(BudgetKind::Memory);
  }

  std::size_t memory_used() const { return used_; }
  std::uint64_t ticks() const { return ticks_; }

 private:
  Clock::time_point deadline_;
  std::size_t memory_limit_;
  std::uint32_t interval_;
  std::size_t used_ = 0;
  std::uint64_t ticks_ = 0;
};

}  // namespace ordfix

#endif  // ORDFIX_BUDGET_HPP
