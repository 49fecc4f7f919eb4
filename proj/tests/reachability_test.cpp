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

#include <doctest.h>

#include <map>
#include <tuple>

#include "ordfix/langs.hpp"
#include "ordfix/reachability.hpp"
#include "support.hpp"

using namespace ordfix;
using ordfix::testing::Word;

namespace {

std::vector<EdgeId> drain(Reachability& r) {
  std::vector<EdgeId> roots;
  while (auto e = r.next_root_edge()) roots.push_back(*e);
  return roots;
}

using EdgeSig = std::tuple<std::uint32_t, std::uint32_t, SymbolId, std::uint32_t>;

std::vector<EdgeSig> signature(const Reachability& r) {
  std::vector<EdgeSig> out;
  for (EdgeId e = 0; e < r.edge_count(); ++e) {
    const auto& x = r.edge(e);
    out.emplace_back(x.from, x.to, x.symbol, x.weight);
  }
  return out;
}

}  // namespace

TEST_CASE("initial queue holds the modification graph and epsilon loops") {
  const auto& lang = tiny_assign();
  const auto& g = lang.normalized();
  const auto mg = build_modgraph(lang.lex("x = z"), g);
  Reachability r(mg, g);
  std::size_t eps = 0;
  for (const auto& p : g.productions()) eps += p.rhs.empty();
  CHECK(r.queue_size() == mg.edges().size() + eps * mg.vertex_count());
  CHECK(r.pops() == 0);
}

TEST_CASE("epsilon productions seed one weight-0 loop per vertex") {
  const auto g = normalize(parse_grammar("start S;\nS -> 'a' B 'a'\nB -> .\n"));
  const auto b = *g.find("B");
  const auto tokens = ordfix::testing::tokens_of(g, {*g.find_fixed("a"), *g.find_fixed("a")});
  const auto mg = build_modgraph(tokens, g);
  Reachability r(mg, g);
  std::size_t loops = 0;
  for (EdgeId e = 0; e < r.edge_count(); ++e) {
    const auto& x = r.edge(e);
    if (x.symbol == b) {
      CHECK(x.from == x.to);
      CHECK(x.weight == 0);
      ++loops;
    }
  }
  CHECK(loops == 3);
}

TEST_CASE("empty input without epsilon productions queues only insertions") {
  const auto g = normalize(parse_grammar("start S;\nS -> 'a' 'b'\n"));
  const auto mg = build_modgraph({}, g);
  Reachability r(mg, g);
  CHECK(r.queue_size() == g.vocabulary().size());
  const auto root = r.next_root_edge();
  REQUIRE(root);
  CHECK(r.edge(*root).weight == 2);
}

TEST_CASE("unnormalized grammars are rejected") {
  const auto g = parse_grammar("start S;\nS -> 'a' 'b' 'c'\n");
  const auto mg = build_modgraph({}, g);
  CHECK_THROWS_AS(Reachability(mg, g), std::invalid_argument);
}

TEST_CASE("root edges of x = z") {
  const auto& lang = tiny_assign();
  const auto& g = lang.normalized();
  const auto tokens = lang.lex("x = z");
  const auto mg = build_modgraph(tokens, g);
  Reachability r(mg, g);
  const auto id = *g.identifier_terminal();
  const auto eq = *g.find_fixed("=");
  const auto semi = *g.find_fixed(";");

  const auto first = r.next_root_edge();
  REQUIRE(first);
  CHECK(r.edge(*first).weight == 1);
  CHECK(r.edge(*first).is_root);
  CHECK(r.edge(*first).from == 0);
  CHECK(r.edge(*first).to == 3);
  {
    const auto words = ordfix::testing::spelled_all(r);
    CHECK(words[*first] == std::set<Word>{{id, eq, id, semi}});
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& x : r.expansions(*first)) ++n;
    CHECK(n == 1);
  }

  const auto second = r.next_root_edge();
  REQUIRE(second);
  CHECK(r.edge(*second).weight == 2);
  // Some weight-2 derivation updates the third token and appends ';'.
  bool found = false;
  for (EdgeId e = 0; e < r.edge_count(); ++e) {
    const auto& x = r.edge(e);
    if (x.symbol != id || x.from != 2 || x.to != 3 || x.weight != 1) continue;
    const auto& leaf = mg.edge(r.leaf_modedge(e));
    if (leaf.kind == EditKind::Update && leaf.lexeme_must_differ) found = true;
  }
  CHECK(found);
  const auto words = ordfix::testing::spelled_all(r);
  CHECK(words[*second].count(Word{id, eq, id, semi}) == 1);
}

TEST_CASE("a valid program has a weight-0 root") {
  const auto& lang = tiny_assign();
  const auto mg = build_modgraph(lang.lex("x = y ;"), lang.normalized());
  Reachability r(mg, lang.normalized());
  const auto root = r.next_root_edge();
  REQUIRE(root);
  CHECK(r.edge(*root).weight == 0);
}

TEST_CASE("binary composition adds child weights; heavier derivations get their own edge") {
  const auto g = normalize(
      parse_grammar("start A;\nA -> B C\nB -> 'b'\nC -> 'c'\n"));
  const auto b = *g.find_fixed("b");
  const auto tokens = ordfix::testing::tokens_of(g, {b, b});
  const auto mg = build_modgraph(tokens, g);
  Reachability r(mg, g, ReachOptions{3});
  const auto root = r.next_root_edge();
  REQUIRE(root);
  CHECK(r.edge(*root).weight == 1);
  const auto& x = *r.expansions(*root).begin();
  CHECK(x.kind == ExpansionKind::Binary);
  CHECK(r.edge(x.left).weight == 0);
  CHECK(r.edge(x.right).weight == 1);
  CHECK(r.edge(x.left).from == 0);
  CHECK(r.edge(x.right).to == 2);

  const auto roots = drain(r);
  std::set<std::uint32_t> weights{r.edge(*root).weight};
  for (auto e : roots) {
    CHECK(r.edge(e).from == 0);
    CHECK(r.edge(e).to == 2);
    weights.insert(r.edge(e).weight);
    for (const auto& y : r.expansions(e)) CHECK(y.weight == r.edge(e).weight);
  }
  CHECK(weights == std::set<std::uint32_t>{1, 2, 3});
}

TEST_CASE("root edges realize exactly the derivable strings within k edits") {
  Rng rng(314);
  for (int trial = 0; trial < 80; ++trial) {
    const auto text = ordfix::testing::random_grammar_text(rng);
    CAPTURE(text);
    const auto src = parse_grammar(text);
    const auto g = normalize(src);
    const Word& vocab = g.vocabulary();
    if (vocab.size() > 4) continue;
    Word w;
    for (auto k = rng.below(6); k > 0; --k) w.push_back(vocab[rng.below(vocab.size())]);
    CAPTURE(w.size());
    const std::uint32_t k = 2;
    const auto mg = build_modgraph(ordfix::testing::tokens_of(g, w), g);
    Reachability r(mg, g, ReachOptions{k});
    const auto roots = drain(r);
    const auto words = ordfix::testing::spelled_all(r);

    std::map<Word, std::uint32_t> best;
    for (auto e : roots)
      for (const auto& u : words[e]) {
        auto [it, fresh] = best.try_emplace(u, r.edge(e).weight);
        if (!fresh) it->second = std::min(it->second, r.edge(e).weight);
      }
    std::set<Word> expected;
    for (const auto& u : ordfix::testing::neighbourhood(w, vocab, k))
      if (ordfix::testing::derives(src, src.start(), u)) expected.insert(u);
    std::set<Word> got;
    for (const auto& [u, weight] : best) {
      got.insert(u);
      CHECK(weight == ordfix::testing::levenshtein(w, u));
    }
    CHECK(got == expected);
  }
}

TEST_CASE("root weights are nondecreasing and roots come after lighter edges") {
  Rng rng(2718);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = normalize(parse_grammar(ordfix::testing::random_grammar_text(rng)));
    const Word& vocab = g.vocabulary();
    Word w;
    for (auto k = rng.below(7); k > 0; --k) w.push_back(vocab[rng.below(vocab.size())]);
    const auto mg = build_modgraph(ordfix::testing::tokens_of(g, w), g);
    Reachability r(mg, g, ReachOptions{3});
    std::vector<std::pair<std::uint32_t, std::size_t>> yields;
    while (auto e = r.next_root_edge()) {
      CHECK(r.edge(*e).is_root);
      yields.emplace_back(r.edge(*e).weight, r.edge_count());
    }
    for (std::size_t i = 1; i < yields.size(); ++i)
      CHECK(yields[i - 1].first <= yields[i].first);
    for (const auto& [weight, created] : yields)
      for (EdgeId e = static_cast<EdgeId>(created); e < r.edge_count(); ++e)
        CHECK((r.edge(e).is_root || r.edge(e).weight > weight));
  }
}

TEST_CASE("saturation is deterministic") {
  const auto& lang = minijava();
  const auto& g = lang.normalized();
  const auto tokens = lang.lex("Object a ; a = new Object ( ;");
  const auto mg = build_modgraph(tokens, g);
  Reachability r1(mg, g, ReachOptions{2});
  Reachability r2(mg, g, ReachOptions{2});
  const auto a = drain(r1);
  const auto b = drain(r2);
  CHECK(a == b);
  CHECK(signature(r1) == signature(r2));
  REQUIRE(r1.expansion_count() == r2.expansion_count());
  for (std::uint32_t i = 0; i < r1.expansion_count(); ++i) {
    const auto& x = r1.expansion_at(i);
    const auto& y = r2.expansion_at(i);
    CHECK(std::tie(x.kind, x.production, x.left, x.right, x.weight) ==
          std::tie(y.kind, y.production, y.left, y.right, y.weight));
  }
}

TEST_CASE("the edge cap bounds saturation") {
  const auto& lang = tiny_assign();
  const auto mg = build_modgraph(lang.lex("x = z"), lang.normalized());
  Reachability r(mg, lang.normalized(), ReachOptions{1});
  const auto roots = drain(r);
  REQUIRE(roots.size() == 1);
  for (EdgeId e = 0; e < r.edge_count(); ++e) CHECK(r.edge(e).weight <= 1);
}

TEST_CASE("memory accounting trips the budget") {
  const auto& lang = minijava();
  const auto mg = build_modgraph(lang.lex("Object a ; a = a . b ( ;"), lang.normalized());
  Budget budget(std::chrono::hours(1), 4096);
  CHECK_THROWS_AS(
      {
        Reachability r(mg, lang.normalized(), ReachOptions{4, &budget});
        drain(r);
      },
      BudgetExceeded);
}
