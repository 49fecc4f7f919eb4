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

#ifndef ORDFIX_REACHABILITY_HPP
#define ORDFIX_REACHABILITY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "ordfix/budget.hpp"
#include "ordfix/grammar.hpp"
#include "ordfix/modgraph.hpp"

namespace ordfix {

using EdgeId = std::uint32_t;
inline constexpr EdgeId kNoEdge = 0xffffffffu;

enum class ExpansionKind : std::uint8_t {
  Leaf,            ///< left = index of the underlying ModEdge
  Epsilon,         ///< A -> epsilon self-loop
  Unary,           ///< A -> B; left = B edge
  Binary,          ///< A -> B C; left = B edge, right = C edge
  DeleteLeft,      ///< left = deletion edge, right = terminal edge it prefixes
  DeleteTrailing,  ///< left = start-symbol edge, right = deletion edge after it
};

struct Expansion {
  ExpansionKind kind = ExpansionKind::Leaf;
  ProductionId production = kNoProduction;
  std::uint32_t left = kNoEdge;
  std::uint32_t right = kNoEdge;
  std::uint32_t weight = 0;
  std::uint32_t next = 0xffffffffu;  // intrusive list link
};

/// A derived edge. Edges are identified by (from, to, symbol, weight);
/// the same label over the same span at a larger weight is a distinct edge,
/// so every expansion of an edge has exactly the edge's weight.
struct ReachEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  SymbolId symbol = kNoSymbol;  ///< kNoSymbol for deletion edges
  std::uint32_t weight = 0;
  bool is_root = false;
  /// Terminal edge whose leaf is an original token; deletions fold onto it.
  bool foldable = false;
  std::uint32_t first_expansion = 0xffffffffu;
  std::uint32_t last_expansion = 0xffffffffu;
  std::uint32_t expansion_count = 0;
};

struct ReachOptions {
  std::uint32_t max_weight = 0xffffffffu;
  Budget* budget = nullptr;
};

/// Resumable shortest-path CFL reachability over a modification graph.
///
/// Work items are served by (weight, root-last, creation order). Root edges
/// (start symbol spanning v_0..v_n) are returned instead of being composed,
/// and since every non-root edge of weight <= k is served before the root
/// edge of weight k, all of that root's descendants are complete when it is
/// returned.
class Reachability {
 public:
  /// Seeds epsilon self-loops at every vertex and enqueues every ModEdge.
  /// Throws std::invalid_argument if the grammar is not normalized.
  Reachability(const ModGraph& mg, const Grammar& normalized,
               ReachOptions options = {});

  /// Continues saturation until the next root edge is dequeued.
  std::optional<EdgeId> next_root_edge();

  const ReachEdge& edge(EdgeId id) const { return edges_[id]; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t expansion_count() const { return expansions_.size(); }
  std::size_t queue_size() const { return queue_.size(); }
  std::uint64_t pops() const { return pops_; }

  const ModGraph& graph() const { return mg_; }
  const Grammar& grammar() const { return g_; }

  class ExpansionRange {
   public:
    class iterator {
     public:
      iterator(const std::vector<Expansion>* v, std::uint32_t i) : v_(v), i_(i) {}
      const Expansion& operator*() const { return (*v_)[i_]; }
      const Expansion* operator->() const { return &(*v_)[i_]; }
      iterator& operator++() {
        i_ = (*v_)[i_].next;
        return *this;
      }
      bool operator==(const iterator& o) const { return i_ == o.i_; }

     private:
      const std::vector<Expansion>* v_;
      std::uint32_t i_;
    };
    ExpansionRange(const std::vector<Expansion>* v, std::uint32_t first)
        : v_(v), first_(first) {}
    iterator begin() const { return {v_, first_}; }
    iterator end() const { return {v_, 0xffffffffu}; }

   private:
    const std::vector<Expansion>* v_;
    std::uint32_t first_;
  };

  /// Expansions of an edge in the order they were discovered.
  ExpansionRange expansions(EdgeId id) const {
    return {&expansions_, edges_[id].first_expansion};
  }
  const Expansion& expansion_at(std::uint32_t index) const {
    return expansions_[index];
  }

  /// For terminal edges: the original/insertion/update ModEdge at the end
  /// of the (possibly empty) chain of folded deletions.
  std::uint32_t leaf_modedge(EdgeId id) const;

  /// Edge counts keyed by (weight, symbol name); deletion edges are "eps".
  std::map<std::pair<std::uint32_t, std::string>, std::size_t> histogram()
      const;

  /// Approximate bytes held by edges, expansions and indexes.
  std::size_t memory_bytes() const;

 private:
  struct Key {
    std::uint32_t from, to, symbol, weight;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = (std::uint64_t{k.from} << 32) ^ k.to;
      h ^= (std::uint64_t{k.symbol} << 40) ^ (std::uint64_t{k.weight} << 20);
      h *= 0x9e3779b97f4a7c15ULL;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  struct Item {
    std::uint32_t weight;
    bool root;
    EdgeId id;
    // inverted for std::priority_queue (max-heap)
    bool operator<(const Item& o) const {
      if (weight != o.weight) return weight > o.weight;
      if (root != o.root) return root && !o.root;
      return id > o.id;
    }
  };

  void add(std::uint32_t from, std::uint32_t to, SymbolId sym,
           std::uint32_t weight, Expansion exp, bool foldable = false);
  void process(EdgeId id);
  std::vector<EdgeId>& out_index(std::uint32_t v, SymbolId s) {
    return out_[static_cast<std::size_t>(v) * nsym_ + s];
  }
  std::vector<EdgeId>& in_index(std::uint32_t v, SymbolId s) {
    return in_[static_cast<std::size_t>(v) * nsym_ + s];
  }

  const ModGraph& mg_;
  const Grammar& g_;
  ReachOptions opt_;
  std::uint32_t n_;
  std::size_t nsym_;

  std::vector<ReachEdge> edges_;
  std::vector<Expansion> expansions_;
  std::unordered_map<Key, EdgeId, KeyHash> lookup_;
  std::priority_queue<Item> queue_;

  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<EdgeId> deletion_popped_;                // by start vertex
  std::vector<std::vector<EdgeId>> foldable_from_;     // popped, by start
  std::vector<std::vector<EdgeId>> start_from_zero_;   // popped, by end
  std::uint64_t pops_ = 0;
  std::size_t index_entries_ = 0;
};

}  // namespace ordfix

#endif  // ORDFIX_REACHABILITY_HPP
