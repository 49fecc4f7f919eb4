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

#include "ordfix/attribute_rules.hpp"

namespace ordfix {

namespace {

// Inherited value of a binarization nonterminal.
struct Partial {
  AttrValue parent;
  std::vector<AttrValue> prefix;

  std::size_t hash() const {
    std::size_t h = parent.hash();
    for (const auto& v : prefix) h = hash_mix(h, v.hash());
    return h;
  }
  bool operator==(const Partial&) const = default;
};

struct Frame {
  const AttrValue* parent;
  std::span<const AttrValue> prefix;
};

Frame unpack(const Production& p, const AttrValue& inherited) {
  if (p.origin.position == 0) return {&inherited, {}};
  const auto& part = inherited.get<Partial>();
  return {&part.parent, part.prefix};
}

}  // namespace

NormalizedRules::NormalizedRules(const Grammar& normalized,
                                 std::shared_ptr<const SequenceRules> rules)
    : g_(normalized), rules_(std::move(rules)) {}

std::vector<TerminalChoice> NormalizedRules::process_terminal(
    const TerminalInfo& terminal, const AttrValue& inherited) const {
  return rules_->terminal(terminal, inherited);
}

std::optional<AttrValue> NormalizedRules::process_left_inherited(
    const Production& p, const AttrValue& inherited) const {
  if (p.origin.synthetic()) return inherited;
  const auto& src = g_.source_production(p.origin.production);
  const auto f = unpack(p, inherited);
  return rules_->inherited(src, p.origin.position, *f.parent, f.prefix);
}

std::optional<AttrValue> NormalizedRules::process_right_inherited(
    const Production& p, const AttrValue& inherited,
    const AttrValue& left) const {
  const auto& src = g_.source_production(p.origin.production);
  const auto f = unpack(p, inherited);
  std::vector<AttrValue> prefix(f.prefix.begin(), f.prefix.end());
  prefix.push_back(left);
  const std::size_t k = src.rhs.size();
  if (p.origin.position + 2 == k)
    return rules_->inherited(src, k - 1, *f.parent, prefix);
  return AttrValue::make(Partial{*f.parent, std::move(prefix)});
}

std::optional<AttrValue> NormalizedRules::process_synthesized(
    const Production& p, const AttrValue& inherited, const AttrValue* left,
    const AttrValue* right) const {
  if (p.origin.synthetic()) return *left;
  const auto& src = g_.source_production(p.origin.production);
  const std::size_t k = src.rhs.size();
  if (k > 2 && p.origin.position + 2 < k) return *right;
  const auto f = unpack(p, inherited);
  std::vector<AttrValue> children(f.prefix.begin(), f.prefix.end());
  if (left) children.push_back(*left);
  if (right) children.push_back(*right);
  return rules_->synthesized(src, *f.parent, children);
}

}  // namespace ordfix
