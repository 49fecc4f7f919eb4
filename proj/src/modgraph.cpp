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

#include "ordfix/modgraph.hpp"

#include <algorithm>
#include <sstream>

namespace ordfix {

const char* to_string(EditKind k) {
  switch (k) {
    case EditKind::Original: return "original";
    case EditKind::Insertion: return "insertion";
    case EditKind::Update: return "update";
    case EditKind::Deletion: return "deletion";
  }
  return "?";
}

std::size_t ModGraph::count(EditKind k) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(),
                    [k](const ModEdge& e) { return e.kind == k; }));
}

ModGraph build_modgraph(std::span<const Token> tokens, const Grammar& g) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto t = tokens[i].terminal;
    if (t >= g.symbols().size() || !g.symbol(t).is_terminal())
      throw ModGraphError("token " + std::to_string(i) + " ('" +
                          tokens[i].lexeme + "') is not a grammar terminal");
  }

  ModGraph mg;
  const auto n = static_cast<std::uint32_t>(tokens.size());
  mg.vertices_ = n + 1;
  mg.tokens_.assign(tokens.begin(), tokens.end());
  const auto& vocab = g.vocabulary();
  mg.edges_.reserve(n + (n + 1) * vocab.size() + n * vocab.size() + n);

  for (std::uint32_t i = 0; i < n; ++i)
    mg.edges_.push_back({i, i + 1, tokens[i].terminal, 0, EditKind::Original});
  for (std::uint32_t v = 0; v <= n; ++v)
    for (auto t : vocab)
      mg.edges_.push_back({v, v, t, 1, EditKind::Insertion});
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto orig = tokens[i].terminal;
    for (auto t : vocab) {
      if (t != orig) {
        mg.edges_.push_back({i, i + 1, t, 1, EditKind::Update});
      } else if (g.symbol(t).is_class_terminal()) {
        mg.edges_.push_back({i, i + 1, t, 1, EditKind::Update, true});
      }
    }
  }
  for (std::uint32_t i = 0; i < n; ++i)
    mg.edges_.push_back({i, i + 1, kNoSymbol, 1, EditKind::Deletion});

  mg.out_.assign(n + 1, {});
  mg.in_.assign(n + 1, {});
  for (std::uint32_t k = 0; k < mg.edges_.size(); ++k) {
    mg.out_[mg.edges_[k].from].push_back(k);
    mg.in_[mg.edges_[k].to].push_back(k);
  }
  return mg;
}

std::uint32_t path_weight(const ModGraph& g, std::span<const ModEdge> path) {
  std::uint32_t at = 0;
  std::uint32_t w = 0;
  for (const auto& e : path) {
    if (e.from != at)
      throw ModGraphError("disconnected path at vertex " + std::to_string(at));
    at = e.to;
    w += e.weight;
  }
  if (at != g.vertex_count() - 1)
    throw ModGraphError("path ends at v" + std::to_string(at) + ", not v" +
                        std::to_string(g.vertex_count() - 1));
  return w;
}

std::string ModGraph::to_dot(const Grammar& g) const {
  std::ostringstream out;
  out << "digraph modgraph {\n  rankdir=LR;\n";
  for (std::uint32_t v = 0; v < vertices_; ++v)
    out << "  v" << v << " [shape=circle];\n";
  for (const auto& e : edges_) {
    std::string label = e.symbol == kNoSymbol ? "eps" : g.symbol(e.symbol).name;
    if (e.kind == EditKind::Original && e.from < tokens_.size() &&
        g.symbol(e.symbol).is_class_terminal())
      label += ":" + tokens_[e.from].lexeme;
    if (e.lexeme_must_differ) label += "*";
    for (auto& c : label)
      if (c == '"') c = '\'';
    out << "  v" << e.from << " -> v" << e.to << " [label=\"" << label << "/"
        << e.weight << "\"" << (e.kind == EditKind::Original ? "" : ", style=dashed")
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ordfix
