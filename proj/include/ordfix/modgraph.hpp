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

#ifndef ORDFIX_MODGRAPH_HPP
#define ORDFIX_MODGRAPH_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordfix/grammar.hpp"

namespace ordfix {

struct Token {
  SymbolId terminal = kNoSymbol;
  std::string lexeme;
  std::uint32_t position = 0;  ///< index in the token stream it came from

  friend bool operator==(const Token& a, const Token& b) {
    return a.terminal == b.terminal && a.lexeme == b.lexeme;
  }
};

enum class EditKind : std::uint8_t { Original, Insertion, Update, Deletion };

const char* to_string(EditKind k);

/// One edge <v_from, v_to, symbol, weight> of the modification graph.
/// Deletion edges carry kNoSymbol (the empty label).
struct ModEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  SymbolId symbol = kNoSymbol;
  std::uint32_t weight = 0;
  EditKind kind = EditKind::Original;
  /// Set on update edges labeled with the class of the token they replace:
  /// the materialized lexeme must differ from the original one.
  bool lexeme_must_differ = false;
};

class ModGraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted modification graph over vertices v_0 .. v_n for an n-token
/// program. Immutable after construction.
class ModGraph {
 public:
  std::uint32_t vertex_count() const { return vertices_; }
  std::uint32_t token_count() const { return vertices_ - 1; }
  std::span<const ModEdge> edges() const { return edges_; }
  const ModEdge& edge(std::uint32_t i) const { return edges_.at(i); }
  std::span<const Token> tokens() const { return tokens_; }

  /// Indices of edges leaving / entering a vertex, in edge order.
  std::span<const std::uint32_t> out_edges(std::uint32_t v) const {
    return out_.at(v);
  }
  std::span<const std::uint32_t> in_edges(std::uint32_t v) const {
    return in_.at(v);
  }

  std::size_t count(EditKind k) const;

  /// Graphviz rendering for debugging.
  std::string to_dot(const Grammar& g) const;

 private:
  friend ModGraph build_modgraph(std::span<const Token>, const Grammar&);

  std::uint32_t vertices_ = 1;
  std::vector<ModEdge> edges_;
  std::vector<Token> tokens_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
};

/// Builds the modification graph. Candidate symbols are the grammar's
/// vocabulary (terminals used by some production); class terminals stand
/// for "some identifier/literal" and are resolved during attribute checking.
ModGraph build_modgraph(std::span<const Token> tokens, const Grammar& g);

/// Sum of edge weights along a path that must start at v_0, end at v_n and
/// be connected; throws ModGraphError otherwise.
std::uint32_t path_weight(const ModGraph& g, std::span<const ModEdge> path);

}  // namespace ordfix

#endif  // ORDFIX_MODGRAPH_HPP
