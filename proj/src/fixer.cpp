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

#include "ordfix/fixer.hpp"

#include <chrono>

#include "ordfix/budget.hpp"

namespace ordfix {

const char* to_string(FixStatus s) {
  switch (s) {
    case FixStatus::Fixed: return "fixed";
    case FixStatus::NoFixWithinCap: return "no-fix-within-cap";
    case FixStatus::TimeLimit: return "time-limit";
    case FixStatus::MemoryLimit: return "memory-limit";
  }
  return "?";
}

const char* to_string(EditOpKind k) {
  switch (k) {
    case EditOpKind::Insert: return "insert";
    case EditOpKind::Delete: return "delete";
    case EditOpKind::Update: return "update";
  }
  return "?";
}

std::vector<Token> apply(const EditScript& script,
                         std::span<const Token> original) {
  std::vector<Token> out;
  std::size_t next = 0;
  auto copy_to = [&](std::size_t pos) {
    for (; next < pos; ++next) out.push_back(original[next]);
  };
  for (const auto& op : script) {
    const bool replaces = op.op != EditOpKind::Insert;
    if (op.pos < next || op.pos > original.size() ||
        (replaces && op.pos == original.size()))
      throw std::invalid_argument("edit at position " + std::to_string(op.pos) +
                                  " is out of order or out of range");
    copy_to(op.pos);
    if (op.op != EditOpKind::Delete) out.push_back(op.token);
    if (replaces) ++next;
  }
  copy_to(original.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].position = static_cast<std::uint32_t>(i);
  return out;
}

namespace {

class ResultBuilder {
 public:
  ResultBuilder(const Reachability& reach, const WitnessTrace& w)
      : reach_(reach), g_(reach.grammar()), mg_(reach.graph()), w_(w) {}

  void walk(std::int32_t id) {
    const auto& n = w_.nodes.at(static_cast<std::size_t>(id));
    const auto& e = reach_.edge(n.edge);
    if (g_.symbol(e.symbol).is_terminal()) {
      terminal(n);
      return;
    }
    const auto& x = reach_.expansion_at(n.expansion);
    switch (x.kind) {
      case ExpansionKind::Epsilon:
        break;
      case ExpansionKind::Unary:
        walk(n.left);
        break;
      case ExpansionKind::Binary:
        walk(n.left);
        walk(n.right);
        break;
      case ExpansionKind::DeleteTrailing:
        walk(n.left);
        deletion(x.right);
        break;
      default:
        throw std::logic_error("witness does not match its edge");
    }
  }

  std::vector<Token> tokens;
  EditScript edits;

 private:
  void terminal(const WitnessNode& n) {
    EdgeId cur = n.edge;
    for (;;) {
      const auto& x = reach_.expansion_at(reach_.edge(cur).first_expansion);
      if (x.kind == ExpansionKind::DeleteLeft) {
        deletion(x.left);
        cur = x.right;
        continue;
      }
      if (x.kind != ExpansionKind::Leaf)
        throw std::logic_error("terminal edge without a leaf");
      const auto& me = mg_.edge(x.left);
      Token t;
      t.terminal = me.symbol;
      t.lexeme = n.lexeme.empty() ? g_.symbol(me.symbol).name : n.lexeme;
      if (me.kind == EditKind::Original) {
        t = mg_.tokens()[me.from];
      } else {
        edits.push_back({me.from,
                         me.kind == EditKind::Insertion ? EditOpKind::Insert
                                                        : EditOpKind::Update,
                         t});
      }
      t.position = static_cast<std::uint32_t>(tokens.size());
      tokens.push_back(std::move(t));
      return;
    }
  }

  void deletion(EdgeId del) {
    const auto& x = reach_.expansion_at(reach_.edge(del).first_expansion);
    const auto& me = mg_.edge(x.left);
    if (me.kind != EditKind::Deletion)
      throw std::logic_error("deletion fold over a non-deletion edge");
    edits.push_back({me.from, EditOpKind::Delete, mg_.tokens()[me.from]});
  }

  const Reachability& reach_;
  const Grammar& g_;
  const ModGraph& mg_;
  const WitnessTrace& w_;
};

}  // namespace

std::pair<std::vector<Token>, EditScript> construct_result(
    const Reachability& reach, const WitnessTrace& witness) {
  if (witness.nodes.empty()) throw std::logic_error("empty witness");
  ResultBuilder b(reach, witness);
  b.walk(0);
  return {std::move(b.tokens), std::move(b.edits)};
}

FixResult fix(const FixRequest& req) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  if (!req.frontend || !req.env)
    throw FixRequestError("fix request needs a language and an environment");
  const auto& lim = req.limits;
  if (!(lim.time_limit_seconds > 0) || lim.memory_limit_bytes == 0)
    throw FixRequestError("time and memory limits must be positive");
  const auto n = static_cast<std::uint32_t>(req.tokens.size());
  const std::uint32_t cap = n + lim.insertion_headroom;
  const std::uint32_t max_edits = lim.max_edits.value_or(cap);
  if (max_edits > cap)
    throw FixRequestError("max edits " + std::to_string(max_edits) +
                          " exceeds token count plus insertion headroom (" +
                          std::to_string(cap) + ")");
  const Grammar& g = req.frontend->normalized();
  for (const auto& t : req.tokens)
    if (t.terminal >= g.symbols().size() || !g.symbol(t.terminal).is_terminal())
      throw FixRequestError("token '" + t.lexeme +
                            "' is not a terminal of the language");

  FixResult res;
  Budget budget(std::chrono::duration<double>(lim.time_limit_seconds),
                lim.memory_limit_bytes, lim.check_interval);
  std::optional<ModGraph> mg;
  std::optional<Reachability> reach;
  std::optional<AttrChecker> checker;
  auto rules = req.frontend->rules(*req.env, req.tokens);
  try {
    mg.emplace(build_modgraph(req.tokens, g));
    reach.emplace(*mg, g, ReachOptions{max_edits, &budget});
    checker.emplace(*reach, *rules, AttrCheckOptions{req.memoize, &budget});
    while (auto root = reach->next_root_edge()) {
      ++res.stats.root_edges;
      budget.check_time();
      if (auto w = checker->first_passing(*root)) {
        auto [tokens, edits] = construct_result(*reach, *w);
        res.status = FixStatus::Fixed;
        res.weight = reach->edge(*root).weight;
        res.fixed = std::move(tokens);
        res.edits = std::move(edits);
        if (res.edits.size() != res.weight)
          throw std::logic_error("edit script length differs from fix weight");
        break;
      }
    }
  } catch (const BudgetExceeded& e) {
    res.status = e.kind() == BudgetKind::Time ? FixStatus::TimeLimit
                                              : FixStatus::MemoryLimit;
    res.diagnostic = e.what();
  }

  if (reach) {
    res.stats.reach_edges = reach->edge_count();
    res.stats.reach_pops = reach->pops();
  }
  if (checker) {
    const auto& s = checker->stats();
    res.stats.memo_entries = s.memo_entries;
    res.stats.memo_values = s.memo_values;
    res.stats.rule_invocations = s.rule_invocations;
  }
  res.stats.memory_bytes = budget.memory_used();

  if (res.status == FixStatus::Fixed) {
    std::vector<SymbolId> terms;
    for (const auto& t : res.fixed) terms.push_back(t.terminal);
    if (!recognizes(req.frontend->grammar(), terms)) {
      res.diagnostic = "fixed program does not re-parse";
    } else {
      auto c = req.frontend->check_compiles(res.fixed, *req.env);
      res.verified = c.ok;
      if (!c.ok) res.diagnostic = "reference checker rejects fix: " + c.diagnostic;
    }
  } else if (res.status == FixStatus::NoFixWithinCap) {
    res.diagnostic = "no fix with at most " + std::to_string(max_edits) +
                     " edits";
  }
  res.stats.elapsed_seconds =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

}  // namespace ordfix
