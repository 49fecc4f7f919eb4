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

#ifndef ORDFIX_GRAMMAR_HPP
#define ORDFIX_GRAMMAR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ordfix {

using SymbolId = std::uint32_t;
using ProductionId = std::uint32_t;

inline constexpr SymbolId kNoSymbol = 0xffffffffu;
inline constexpr ProductionId kNoProduction = 0xffffffffu;

enum class SymbolKind : std::uint8_t { Terminal, Nonterminal };

/// How a terminal matches lexemes.
enum class TerminalClass : std::uint8_t {
  Fixed,       ///< keyword or punctuation; matches exactly one lexeme
  Identifier,  ///< matches any identifier lexeme
  Literal,     ///< matches any literal lexeme of the class
};

struct Symbol {
  SymbolId id = kNoSymbol;
  std::string name;  ///< display name; for fixed terminals, the lexeme itself
  SymbolKind kind = SymbolKind::Nonterminal;
  TerminalClass terminal_class = TerminalClass::Fixed;
  bool fresh = false;  ///< introduced by normalization

  bool is_terminal() const { return kind == SymbolKind::Terminal; }
  bool is_class_terminal() const {
    return is_terminal() && terminal_class != TerminalClass::Fixed;
  }
};

/// Links a production back to the un-normalized production it came from.
/// `position` is the index in the source right-hand side of this
/// production's first symbol.
struct Origin {
  ProductionId production = kNoProduction;
  std::uint32_t position = 0;

  bool synthetic() const { return production == kNoProduction; }
};

struct Production {
  ProductionId id = kNoProduction;
  SymbolId lhs = kNoSymbol;
  std::vector<SymbolId> rhs;
  Origin origin;
};

class GrammarError : public std::runtime_error {
 public:
  GrammarError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A context-free grammar. Immutable once built; normalize() returns a new
/// grammar whose productions all have at most two right-hand-side symbols.
class Grammar {
 public:
  Grammar() = default;

  std::span<const Symbol> symbols() const { return symbols_; }
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  std::span<const Production> productions() const { return productions_; }
  const Production& production(ProductionId id) const {
    return productions_.at(id);
  }
  SymbolId start() const { return start_; }

  std::span<const ProductionId> by_lhs(SymbolId s) const;
  std::span<const ProductionId> by_first(SymbolId s) const;
  std::span<const ProductionId> by_second(SymbolId s) const;

  std::optional<SymbolId> find(std::string_view name) const;
  /// Looks up a fixed-lexeme terminal by its lexeme.
  std::optional<SymbolId> find_fixed(std::string_view lexeme) const;
  std::optional<SymbolId> identifier_terminal() const;
  std::optional<SymbolId> literal_terminal() const;

  /// Terminals that occur in at least one right-hand side, in id order.
  const std::vector<SymbolId>& vocabulary() const { return vocabulary_; }

  bool is_normalized() const;

  /// Productions of the grammar this one was normalized from (or this
  /// grammar's own productions when it was not produced by normalize()).
  std::span<const Production> source_productions() const {
    return source_.empty() ? std::span<const Production>(productions_)
                           : std::span<const Production>(source_);
  }
  const Production& source_production(ProductionId id) const {
    return source_productions()[id];
  }

  /// Renders the grammar in the textual format accepted by parse_grammar.
  /// Fresh nonterminals are printed with their generated names.
  std::string to_text() const;

  class Builder;

 private:
  void index();

  std::vector<Symbol> symbols_;
  std::vector<Production> productions_;
  std::vector<Production> source_;
  SymbolId start_ = kNoSymbol;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::unordered_map<std::string, SymbolId> fixed_by_lexeme_;
  std::vector<std::vector<ProductionId>> by_lhs_;
  std::vector<std::vector<ProductionId>> by_first_;
  std::vector<std::vector<ProductionId>> by_second_;
  std::vector<SymbolId> vocabulary_;

  friend Grammar normalize(const Grammar& g);
};

/// Programmatic construction, used by parse_grammar and by tests.
class Grammar::Builder {
 public:
  SymbolId terminal(std::string_view lexeme);
  SymbolId class_terminal(std::string_view name, TerminalClass cls);
  SymbolId nonterminal(std::string_view name);
  ProductionId production(SymbolId lhs, std::vector<SymbolId> rhs);
  void set_start(SymbolId s) { start_ = s; }

  /// Throws GrammarError if no start symbol was set, the start symbol is a
  /// terminal, or some nonterminal has no production.
  Grammar build() &&;

 private:
  SymbolId add(std::string_view name, SymbolKind kind, TerminalClass cls);

  Grammar g_;
  SymbolId start_ = kNoSymbol;
};

/// Parses the line-oriented grammar description format:
///
///     start S;
///     terminal ID : identifier;
///     terminal NUM : literal;
///     terminal '<' '+';          # fixed terminals not used by any rule
///     S -> ID '=' ID ';'
///     B -> .                     # empty production
Grammar parse_grammar(std::string_view text);

/// Left-to-right binarization: A -> X1 ... Xk becomes A -> X1 A1,
/// A1 -> X2 A2, ..., A(k-2) -> X(k-1) Xk. Deterministic and idempotent.
Grammar normalize(const Grammar& g);

/// Earley recognizer over an arbitrary grammar; accepts the sequence of
/// terminal ids iff the start symbol derives it.
bool recognizes(const Grammar& g, std::span<const SymbolId> terminals);

}  // namespace ordfix

#endif  // ORDFIX_GRAMMAR_HPP
