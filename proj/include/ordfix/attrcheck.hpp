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

#ifndef ORDFIX_ATTRCHECK_HPP
#define ORDFIX_ATTRCHECK_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ordfix/attr_value.hpp"
#include "ordfix/attribute_rules.hpp"
#include "ordfix/budget.hpp"
#include "ordfix/reachability.hpp"

namespace ordfix {

/// An attribute rule threw; carries the production being evaluated.
class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AttrCheckOptions {
  /// When false every (edge, inherited) query gets a private entry, so no
  /// work is shared. Only useful for differential testing.
  bool memoize = true;
  Budget* budget = nullptr;
};

struct AttrCheckStats {
  std::uint64_t rule_invocations = 0;
  std::size_t memo_entries = 0;
  std::size_t memo_values = 0;
};

/// One node of the derivation chosen for a passing root value.
struct WitnessNode {
  EdgeId edge = kNoEdge;
  /// Global expansion index (Reachability::expansion_at) used by this node;
  /// for terminal edges, the edge's single expansion.
  std::uint32_t expansion = 0;
  AttrValue inherited;
  AttrValue synthesized;
  std::string lexeme;  ///< materialized lexeme, terminal edges only
  std::int32_t left = -1;
  std::int32_t right = -1;
};

struct WitnessTrace {
  AttrValue value;
  std::vector<WitnessNode> nodes;  ///< nodes[0] is the root edge
};

/// Merged attribute checking over a saturated reachability graph: lazily
/// enumerates the distinct synthesized values of an edge under an inherited
/// value, pruning on rule failure and memoizing per (edge, inherited).
class AttrChecker {
 private:
  struct Entry;

 public:
  AttrChecker(const Reachability& reach, const AttributeRules& rules,
              AttrCheckOptions options = {});
  ~AttrChecker();
  AttrChecker(const AttrChecker&) = delete;
  AttrChecker& operator=(const AttrChecker&) = delete;

  /// Resumable cursor over the values of one (edge, inherited) key. Values
  /// already materialized are replayed before new ones are computed.
  class Stream {
   public:
    std::optional<AttrValue> next();

   private:
    friend class AttrChecker;
    Stream(AttrChecker* c, Entry* e) : checker_(c), entry_(e) {}
    AttrChecker* checker_;
    Entry* entry_;
    std::size_t index_ = 0;
  };

  Stream check_attr(EdgeId edge, const AttrValue& inherited);

  /// Drives the root edge with the rules' root inherited value; returns the
  /// first synthesized value and the derivation that produced it.
  std::optional<WitnessTrace> first_passing(EdgeId root);

  const AttrCheckStats& stats() const { return stats_; }

 private:
  struct Provenance {
    std::uint32_t expansion;
    std::uint32_t left_index;
    std::uint32_t right_index;
    Entry* left;
    Entry* right;
  };
  struct KeyHash {
    std::size_t operator()(const std::pair<EdgeId, AttrValue>& k) const {
      return hash_mix(k.first * 0x9e3779b1u, k.second.hash());
    }
  };

  Entry* entry_for(EdgeId edge, const AttrValue& inherited);
  bool get(Entry& e, std::size_t index);
  bool produce(Entry& e);
  void init_terminal(Entry& e);
  bool add_value(Entry& e, AttrValue v, const Provenance& p);
  void tick();
  std::int32_t build_witness(const Entry& e, std::size_t index,
                             WitnessTrace& out) const;

  const Reachability& reach_;
  const AttributeRules& rules_;
  AttrCheckOptions opt_;
  AttrCheckStats stats_;
  std::unordered_map<std::pair<EdgeId, AttrValue>, std::unique_ptr<Entry>,
                     KeyHash>
      memo_;
  std::vector<std::unique_ptr<Entry>> private_;
};

}  // namespace ordfix

#endif  // ORDFIX_ATTRCHECK_HPP
