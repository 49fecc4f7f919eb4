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

#include "ordfix/reachability.hpp"

#include <stdexcept>

namespace ordfix {

namespace {
constexpr std::uint32_t kNil = 0xffffffffu;
}

Reachability::Reachability(const ModGraph& mg, const Grammar& normalized,
                           ReachOptions options)
    : mg_(mg),
      g_(normalized),
      opt_(options),
      n_(mg.token_count()),
      nsym_(normalized.symbols().size()) {
  if (!g_.is_normalized())
    throw std::invalid_argument("reachability requires a normalized grammar");
  for (const auto& p : g_.productions())
    for (auto s : p.rhs)
      if (s == g_.start())
        throw std::invalid_argument(
            "start symbol appears on a right-hand side; normalize() first");

  const std::size_t nv = static_cast<std::size_t>(n_) + 1;
  out_.resize(nv * nsym_);
  in_.resize(nv * nsym_);
  deletion_popped_.assign(nv, kNoEdge);
  foldable_from_.resize(nv);
  start_from_zero_.resize(nv);

  for (const auto& p : g_.productions()) {
    if (!p.rhs.empty()) continue;
    for (std::uint32_t v = 0; v <= n_; ++v)
      add(v, v, p.lhs, 0, Expansion{ExpansionKind::Epsilon, p.id});
  }
  const auto medges = mg_.edges();
  for (std::uint32_t k = 0; k < medges.size(); ++k) {
    const auto& e = medges[k];
    add(e.from, e.to, e.symbol, e.weight,
        Expansion{ExpansionKind::Leaf, kNoProduction, k},
        e.kind == EditKind::Original);
  }
}

void Reachability::add(std::uint32_t from, std::uint32_t to, SymbolId sym,
                       std::uint32_t weight, Expansion exp, bool foldable) {
  if (weight > opt_.max_weight) return;
  exp.weight = weight;
  exp.next = kNil;
  const auto xi = static_cast<std::uint32_t>(expansions_.size());
  expansions_.push_back(exp);

  const Key key{from, to, sym, weight};
  auto [it, inserted] =
      lookup_.try_emplace(key, static_cast<EdgeId>(edges_.size()));
  if (!inserted) {
    auto& e = edges_[it->second];
    expansions_[e.last_expansion].next = xi;
    e.last_expansion = xi;
    ++e.expansion_count;
    if (opt_.budget) opt_.budget->charge(sizeof(Expansion));
    return;
  }
  ReachEdge e;
  e.from = from;
  e.to = to;
  e.symbol = sym;
  e.weight = weight;
  e.is_root = sym == g_.start() && from == 0 && to == n_;
  e.foldable = foldable;
  e.first_expansion = e.last_expansion = xi;
  e.expansion_count = 1;
  edges_.push_back(e);
  queue_.push(Item{weight, e.is_root, it->second});
  if (opt_.budget)
    opt_.budget->charge(sizeof(ReachEdge) + sizeof(Expansion) + 48);
}

std::optional<EdgeId> Reachability::next_root_edge() {
  while (!queue_.empty()) {
    const Item item = queue_.top();
    queue_.pop();
    ++pops_;
    if (opt_.budget) opt_.budget->tick();
    if (edges_[item.id].is_root) return item.id;
    process(item.id);
  }
  return std::nullopt;
}

void Reachability::process(EdgeId id) {
  // copy: edges_ may reallocate while composing
  const ReachEdge e = edges_[id];
  const auto i = e.from;
  const auto j = e.to;

  if (e.symbol == kNoSymbol) {
    // deletion edge v_i -> v_{i+1}
    deletion_popped_[i] = id;
    for (std::size_t k = 0; k < foldable_from_[j].size(); ++k) {
      const ReachEdge f = edges_[foldable_from_[j][k]];
      add(i, f.to, f.symbol, e.weight + f.weight,
          Expansion{ExpansionKind::DeleteLeft, kNoProduction, id,
                    foldable_from_[j][k]},
          true);
    }
    for (std::size_t k = 0; k < start_from_zero_[i].size(); ++k) {
      const EdgeId fid = start_from_zero_[i][k];
      add(0, j, g_.start(), edges_[fid].weight + e.weight,
          Expansion{ExpansionKind::DeleteTrailing, kNoProduction, fid, id});
    }
    return;
  }

  out_index(i, e.symbol).push_back(id);
  in_index(j, e.symbol).push_back(id);
  index_entries_ += 2;

  for (auto pid : g_.by_first(e.symbol)) {
    const auto& p = g_.production(pid);
    if (p.rhs.size() == 1) {
      add(i, j, p.lhs, e.weight, Expansion{ExpansionKind::Unary, pid, id});
      continue;
    }
    // A -> X C, this edge is X
    const auto& right = out_index(j, p.rhs[1]);
    for (std::size_t k = 0; k < right.size(); ++k) {
      const EdgeId fid = right[k];
      const auto& f = edges_[fid];
      add(i, f.to, p.lhs, e.weight + f.weight,
          Expansion{ExpansionKind::Binary, pid, id, fid});
    }
  }
  for (auto pid : g_.by_second(e.symbol)) {
    const auto& p = g_.production(pid);
    // A -> B X, this edge is X
    const auto& left = in_index(i, p.rhs[0]);
    for (std::size_t k = 0; k < left.size(); ++k) {
      const EdgeId fid = left[k];
      if (fid == id) continue;  // self-loop pair already made above
      const auto& f = edges_[fid];
      add(f.from, j, p.lhs, f.weight + e.weight,
          Expansion{ExpansionKind::Binary, pid, fid, id});
    }
  }

  if (e.foldable) {
    foldable_from_[i].push_back(id);
    if (i > 0 && deletion_popped_[i - 1] != kNoEdge) {
      const EdgeId del = deletion_popped_[i - 1];
      add(i - 1, j, e.symbol, edges_[del].weight + e.weight,
          Expansion{ExpansionKind::DeleteLeft, kNoProduction, del, id}, true);
    }
  }
  if (e.symbol == g_.start() && i == 0 && j < n_) {
    start_from_zero_[j].push_back(id);
    if (deletion_popped_[j] != kNoEdge) {
      const EdgeId del = deletion_popped_[j];
      add(0, j + 1, e.symbol, e.weight + edges_[del].weight,
          Expansion{ExpansionKind::DeleteTrailing, kNoProduction, id, del});
    }
  }
}

std::uint32_t Reachability::leaf_modedge(EdgeId id) const {
  for (;;) {
    const auto& x = expansions_[edges_[id].first_expansion];
    if (x.kind == ExpansionKind::Leaf) return x.left;
    if (x.kind != ExpansionKind::DeleteLeft)
      throw std::logic_error("leaf_modedge on a nonterminal edge");
    id = x.right;
  }
}

std::map<std::pair<std::uint32_t, std::string>, std::size_t>
Reachability::histogram() const {
  std::map<std::pair<std::uint32_t, std::string>, std::size_t> h;
  for (const auto& e : edges_)
    ++h[{e.weight, e.symbol == kNoSymbol ? std::string("eps")
                                          : g_.symbol(e.symbol).name}];
  return h;
}

std::size_t Reachability::memory_bytes() const {
  return edges_.size() * (sizeof(ReachEdge) + 48) +
         expansions_.size() * sizeof(Expansion) +
         index_entries_ * sizeof(EdgeId) +
         (out_.size() + in_.size()) * sizeof(std::vector<EdgeId>);
}

}  // namespace ordfix
