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

// tiny-assign: a list of assignments between variables of declared types.
// Only variables of the same type may be assigned to each other.

#include <algorithm>
#include <cstdlib>

#include "ordfix/langs.hpp"

namespace ordfix {

namespace {

constexpr std::string_view kGrammar = R"(
start Prog;
terminal ID : identifier;
Prog -> .
Prog -> Stmt Prog
Stmt -> ID '=' ID ';'
)";

class TinyRules final : public SequenceRules {
 public:
  TinyRules(const Grammar& g, const TypeEnv& env) : g_(g) {
    for (const auto& [n, t] : env.vars()) vars_.emplace_back(n, t);
  }

  std::vector<TerminalChoice> terminal(const TerminalInfo& t,
                                       const AttrValue&) const override {
    if (!g_.symbol(t.terminal).is_class_terminal())
      return {{AttrValue{}, g_.symbol(t.terminal).name}};
    if (!t.lexeme_must_differ && t.kind == EditKind::Original) {
      for (const auto& [n, ty] : vars_)
        if (n == t.original_lexeme) return {{AttrValue::make(ty), n}};
      return {};
    }
    std::vector<TerminalChoice> out;
    if (t.lexeme_must_differ) {
      // nearest declarations first, so a replacement stays close to the
      // name it replaces
      std::ptrdiff_t at = -1;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].first == t.original_lexeme) at = static_cast<std::ptrdiff_t>(i);
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (static_cast<std::ptrdiff_t>(i) != at) order.push_back(i);
      if (at >= 0)
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
          return std::abs(static_cast<std::ptrdiff_t>(a) - at) <
                 std::abs(static_cast<std::ptrdiff_t>(b) - at);
        });
      for (auto i : order)
        out.push_back({AttrValue::make(vars_[i].second), vars_[i].first});
      return out;
    }
    for (const auto& [n, ty] : vars_) out.push_back({AttrValue::make(ty), n});
    return out;
  }

  std::optional<AttrValue> inherited(const Production&, std::size_t,
                                     const AttrValue&,
                                     std::span<const AttrValue>) const override {
    return AttrValue{};
  }

  std::optional<AttrValue> synthesized(
      const Production& p, const AttrValue&,
      std::span<const AttrValue> children) const override {
    if (p.rhs.size() == 4 && !(children[0] == children[2])) return std::nullopt;
    return AttrValue{};
  }

  AttrValue root() const override { return {}; }

 private:
  const Grammar& g_;
  std::vector<std::pair<std::string, std::string>> vars_;
};

class TinyAssign final : public Frontend {
 public:
  TinyAssign() : Frontend(kGrammar) {}

  std::string_view name() const override { return "tiny-assign"; }

  void validate_env(const TypeEnv& env) const override {
    if (!env.classes().empty())
      throw EnvError("tiny-assign environments declare variables only", 0);
  }

  std::shared_ptr<const AttributeRules> rules(
      const TypeEnv& env, std::span<const Token>) const override {
    return std::make_shared<NormalizedRules>(
        normalized(), std::make_shared<TinyRules>(grammar(), env));
  }

  CheckResult check_compiles(std::span<const Token> tokens,
                             const TypeEnv& env) const override {
    auto type_of = [&](const Token& t) -> const std::string* {
      for (const auto& [n, ty] : env.vars())
        if (n == t.lexeme) return &ty;
      return nullptr;
    };
    const auto id = *grammar().identifier_terminal();
    const auto eq = *grammar().find_fixed("=");
    const auto semi = *grammar().find_fixed(";");
    std::size_t i = 0;
    auto at = [&](std::size_t k, SymbolId s) {
      return k < tokens.size() && tokens[k].terminal == s;
    };
    auto where = [&](std::size_t k) {
      return "token " + std::to_string(k) +
             (k < tokens.size() ? " '" + tokens[k].lexeme + "'"
                                : std::string(" (end of input)"));
    };
    auto reject = [&](std::string why, std::size_t k) {
      return CheckResult{false, std::move(why), std::min(k, tokens.size())};
    };
    while (i < tokens.size()) {
      const SymbolId shape[] = {id, eq, id, semi};
      for (std::size_t k = 0; k < 4; ++k)
        if (!at(i + k, shape[k]))
          return reject("parse error at " + where(i + k) + ": expected '" +
                            grammar().symbol(shape[k]).name + "'",
                        i + k);
      const auto* l = type_of(tokens[i]);
      const auto* r = type_of(tokens[i + 2]);
      if (!l) return reject("undeclared variable '" + tokens[i].lexeme + "'", i + 3);
      if (!r)
        return reject("undeclared variable '" + tokens[i + 2].lexeme + "'",
                      i + 3);
      if (*l != *r)
        return reject("cannot assign " + tokens[i + 2].lexeme + " : " + *r +
                          " to " + tokens[i].lexeme + " : " + *l,
                      i + 3);
      i += 4;
    }
    return {true, "", tokens.size()};
  }
};

}  // namespace

const Frontend& tiny_assign() {
  static const TinyAssign f;
  return f;
}

}  // namespace ordfix
