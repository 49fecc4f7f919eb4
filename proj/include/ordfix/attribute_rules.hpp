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

#ifndef ORDFIX_ATTRIBUTE_RULES_HPP
#define ORDFIX_ATTRIBUTE_RULES_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordfix/attr_value.hpp"
#include "ordfix/grammar.hpp"
#include "ordfix/modgraph.hpp"

namespace ordfix {

/// What a terminal edge stands for when its attribute is computed.
struct TerminalInfo {
  SymbolId terminal = kNoSymbol;
  EditKind kind = EditKind::Original;
  /// Lexeme of the token at this position (original and update edges).
  std::string_view original_lexeme;
  bool lexeme_must_differ = false;
  std::uint32_t position = 0;
};

/// One way to materialize a terminal: its synthesized value and the lexeme
/// that produces it. Class terminals may yield several choices (the `sel`
/// candidates).
struct TerminalChoice {
  AttrValue value;
  std::string lexeme;
};

/// Attribute rules over a normalized grammar: one inherited and one
/// synthesized value per symbol. A disengaged optional (or an empty choice
/// list) prunes the branch. Implementations must be pure.
class AttributeRules {
 public:
  virtual ~AttributeRules() = default;

  virtual std::vector<TerminalChoice> process_terminal(
      const TerminalInfo& terminal, const AttrValue& inherited) const = 0;
  /// I_B for A -> B or A -> B C.
  virtual std::optional<AttrValue> process_left_inherited(
      const Production& p, const AttrValue& inherited) const = 0;
  /// I_C for A -> B C.
  virtual std::optional<AttrValue> process_right_inherited(
      const Production& p, const AttrValue& inherited,
      const AttrValue& left) const = 0;
  /// S_A; `left`/`right` are null for absent children (A -> epsilon, A -> B).
  virtual std::optional<AttrValue> process_synthesized(
      const Production& p, const AttrValue& inherited, const AttrValue* left,
      const AttrValue* right) const = 0;
  /// I_S fed to the root edge.
  virtual AttrValue root_inherited() const = 0;
};

/// Rules written against the un-normalized productions, the way a
/// recursive-descent attribute evaluator sees them: child i's inherited
/// value may depend on the parent's and on the synthesized values of
/// children 0..i-1.
class SequenceRules {
 public:
  virtual ~SequenceRules() = default;

  virtual std::vector<TerminalChoice> terminal(
      const TerminalInfo& terminal, const AttrValue& inherited) const = 0;
  virtual std::optional<AttrValue> inherited(
      const Production& p, std::size_t index, const AttrValue& parent,
      std::span<const AttrValue> left_siblings) const = 0;
  virtual std::optional<AttrValue> synthesized(
      const Production& p, const AttrValue& parent,
      std::span<const AttrValue> children) const = 0;
  virtual AttrValue root() const = 0;
};

/// Binds SequenceRules to a normalized grammar. A binarization nonterminal
/// inherits its parent's value together with the synthesized values of the
/// siblings to its left; the innermost one fires the source production's
/// synthesized rule and the result passes up unchanged.
class NormalizedRules final : public AttributeRules {
 public:
  NormalizedRules(const Grammar& normalized,
                  std::shared_ptr<const SequenceRules> rules);

  std::vector<TerminalChoice> process_terminal(
      const TerminalInfo& terminal, const AttrValue& inherited) const override;
  std::optional<AttrValue> process_left_inherited(
      const Production& p, const AttrValue& inherited) const override;
  std::optional<AttrValue> process_right_inherited(
      const Production& p, const AttrValue& inherited,
      const AttrValue& left) const override;
  std::optional<AttrValue> process_synthesized(
      const Production& p, const AttrValue& inherited, const AttrValue* left,
      const AttrValue* right) const override;
  AttrValue root_inherited() const override { return rules_->root(); }

 private:
  const Grammar& g_;
  std::shared_ptr<const SequenceRules> rules_;
};

}  // namespace ordfix

#endif  // ORDFIX_ATTRIBUTE_RULES_HPP
