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

#ifndef ORDFIX_FIXER_HPP
#define ORDFIX_FIXER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordfix/attrcheck.hpp"
#include "ordfix/langs.hpp"
#include "ordfix/modgraph.hpp"
#include "ordfix/reachability.hpp"

namespace ordfix {

struct FixLimits {
  /// Defaults to token count + insertion_headroom.
  std::optional<std::uint32_t> max_edits;
  std::uint32_t insertion_headroom = 8;
  double time_limit_seconds = 600;
  std::size_t memory_limit_bytes = std::size_t{15} << 30;
  /// Rule invocations / queue pops between clock reads.
  std::uint32_t check_interval = 4096;
};

struct FixRequest {
  std::vector<Token> tokens;
  const Frontend* frontend = nullptr;
  const TypeEnv* env = nullptr;
  FixLimits limits;
  bool memoize = true;
};

class FixRequestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FixStatus : std::uint8_t {
  Fixed,
  NoFixWithinCap,
  TimeLimit,
  MemoryLimit,
};

const char* to_string(FixStatus s);

enum class EditOpKind : std::uint8_t { Insert, Delete, Update };

const char* to_string(EditOpKind k);

struct EditOp {
  /// Index into the original token stream; inserts go before that token
  /// (position n appends).
  std::uint32_t pos = 0;
  EditOpKind op = EditOpKind::Insert;
  Token token;  ///< inserted / replacement token; the removed one for deletes

  bool operator==(const EditOp&) const = default;
};

using EditScript = std::vector<EditOp>;

/// Applies a script whose operations are ordered by position (inserts at a
/// position before the edit of the token there). Throws std::invalid_argument
/// on a malformed script.
std::vector<Token> apply(const EditScript& script,
                         std::span<const Token> original);

struct FixStats {
  std::uint64_t root_edges = 0;
  std::uint64_t reach_edges = 0;
  std::uint64_t reach_pops = 0;
  std::uint64_t memo_entries = 0;
  std::uint64_t memo_values = 0;
  std::uint64_t rule_invocations = 0;
  std::uint64_t memory_bytes = 0;
  double elapsed_seconds = 0;
};

struct FixResult {
  FixStatus status = FixStatus::NoFixWithinCap;
  std::uint32_t weight = 0;
  std::vector<Token> fixed;
  EditScript edits;
  /// The fixed tokens re-parse under the grammar and pass the frontend's
  /// reference checker.
  bool verified = false;
  std::string diagnostic;
  FixStats stats;
};

/// Rebuilds the fixed program and its edit script from a passing witness.
std::pair<std::vector<Token>, EditScript> construct_result(
    const Reachability& reach, const WitnessTrace& witness);

/// Minimal-edit repair: pulls root edges in weight order and returns the
/// first whose attribute check passes. Throws FixRequestError on invalid
/// requests and RuleError if a language rule fails.
FixResult fix(const FixRequest& req);

}  // namespace ordfix

#endif  // ORDFIX_FIXER_HPP
