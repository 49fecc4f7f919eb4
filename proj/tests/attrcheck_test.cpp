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

#include <unordered_set>

#include "ordfix/attrcheck.hpp"
#include "ordfix/corpus.hpp"
#include "ordfix/langs.hpp"

using namespace ordfix;

namespace {

struct Instance {
  const Frontend* lang;
  TypeEnv env;
  std::vector<Token> tokens;
  ModGraph mg;
  std::shared_ptr<const AttributeRules> rules;
  std::unique_ptr<Reachability> reach;

  Instance(const Frontend& l, TypeEnv e, std::vector<Token> ts,
           std::uint32_t cap = 0xffffffffu)
      : lang(&l),
        env(std::move(e)),
        tokens(std::move(ts)),
        mg(build_modgraph(tokens, l.normalized())),
        rules(l.rules(env, tokens)),
        reach(std::make_unique<Reachability>(mg, l.normalized(),
                                             ReachOptions{cap})) {}
};

TypeEnv abc_env() { return parse_env("var x : A; var y : A; var z : B;"); }

std::vector<AttrValue> all(AttrChecker::Stream s) {
  std::vector<AttrValue> out;
  while (auto v = s.next()) out.push_back(*v);
  return out;
}

std::unordered_set<AttrValue> distinct(const std::vector<AttrValue>& vs) {
  return {vs.begin(), vs.end()};
}

// Replaces pruning by a poison value that propagates, so the unpruned
// evaluation can be filtered afterwards.
struct Dead {
  bool operator==(const Dead&) const = default;
  std::size_t hash() const { return 0xdead; }
};

class NoPruning final : public AttributeRules {
 public:
  explicit NoPruning(const AttributeRules& inner) : inner_(inner) {}

  static bool dead(const AttrValue& v) { return v.get_if<Dead>() != nullptr; }
  static AttrValue poison() { return AttrValue::make(Dead{}); }

  std::vector<TerminalChoice> process_terminal(
      const TerminalInfo& t, const AttrValue& i) const override {
    if (dead(i)) return {{poison(), "?"}};
    auto c = inner_.process_terminal(t, i);
    if (c.empty()) return {{poison(), "?"}};
    return c;
  }
  std::optional<AttrValue> process_left_inherited(
      const Production& p, const AttrValue& i) const override {
    if (dead(i)) return poison();
    return inner_.process_left_inherited(p, i).value_or(poison());
  }
  std::optional<AttrValue> process_right_inherited(
      const Production& p, const AttrValue& i,
      const AttrValue& l) const override {
    if (dead(i) || dead(l)) return poison();
    return inner_.process_right_inherited(p, i, l).value_or(poison());
  }
  std::optional<AttrValue> process_synthesized(
      const Production& p, const AttrValue& i, const AttrValue* l,
      const AttrValue* r) const override {
    if (dead(i) || (l && dead(*l)) || (r && dead(*r))) return poison();
    return inner_.process_synthesized(p, i, l, r).value_or(poison());
  }
  AttrValue root_inherited() const override { return inner_.root_inherited(); }

 private:
  const AttributeRules& inner_;
};

// Integer-valued rules for hand-written grammars.
class CountingRules final : public AttributeRules {
 public:
  std::function<std::optional<AttrValue>(const Production&, const AttrValue*,
                                         const AttrValue*)>
      synth;
  std::vector<TerminalChoice> process_terminal(const TerminalInfo&,
                                               const AttrValue&) const override {
    return {{AttrValue::make(1), "a"}};
  }
  std::optional<AttrValue> process_left_inherited(
      const Production&, const AttrValue& i) const override {
    return i;
  }
  std::optional<AttrValue> process_right_inherited(
      const Production&, const AttrValue& i, const AttrValue&) const override {
    return i;
  }
  std::optional<AttrValue> process_synthesized(
      const Production& p, const AttrValue&, const AttrValue* l,
      const AttrValue* r) const override {
    return synth(p, l, r);
  }
  AttrValue root_inherited() const override { return {}; }
};

}  // namespace

TEST_CASE("type mismatch prunes, a matching selection passes") {
  const auto& lang = tiny_assign();
  SUBCASE("x = z ; has no passing value") {
    Instance in(lang, abc_env(), lang.lex("x = z ;"));
    const auto root = in.reach->next_root_edge();
    REQUIRE(root);
    REQUIRE(in.reach->edge(*root).weight == 0);
    AttrChecker c(*in.reach, *in.rules);
    CHECK(all(c.check_attr(*root, in.rules->root_inherited())).empty());
    CHECK_FALSE(c.first_passing(*root));
  }
  SUBCASE("x = z: weight 1 fails, weight 2 passes through y") {
    Instance in(lang, abc_env(), lang.lex("x = z"));
    AttrChecker c(*in.reach, *in.rules);
    const auto r1 = in.reach->next_root_edge();
    REQUIRE(r1);
    CHECK(in.reach->edge(*r1).weight == 1);
    CHECK_FALSE(c.first_passing(*r1));
    const auto r2 = in.reach->next_root_edge();
    REQUIRE(r2);
    CHECK(in.reach->edge(*r2).weight == 2);
    CHECK_FALSE(all(c.check_attr(*r2, in.rules->root_inherited())).empty());
    const auto w = c.first_passing(*r2);
    REQUIRE(w);
    CHECK(w->nodes[0].edge == *r2);
    std::vector<std::string> leaves;
    for (const auto& n : w->nodes)
      if (!n.lexeme.empty() && n.left < 0) leaves.push_back(n.lexeme);
    CHECK(std::find(leaves.begin(), leaves.end(), "y") != leaves.end());
    CHECK(std::find(leaves.begin(), leaves.end(), "z") == leaves.end());
  }
  SUBCASE("valid input passes at weight 0") {
    Instance in(lang, abc_env(), lang.lex("x = y ;"));
    AttrChecker c(*in.reach, *in.rules);
    const auto root = in.reach->next_root_edge();
    REQUIRE(root);
    CHECK(in.reach->edge(*root).weight == 0);
    CHECK(c.first_passing(*root));
  }
}

TEST_CASE("re-querying a key replays memoized values without new rule calls") {
  const auto& lang = minijava();
  const auto env = parse_env(
      "class A : Object { field A next; method A get(A); }\nvar p : A;\n");
  Instance in(lang, env, lang.lex("A a ; a = p . get ( a ) ; p . next = a"), 2);
  AttrChecker c(*in.reach, *in.rules);
  std::vector<EdgeId> roots;
  while (auto r = in.reach->next_root_edge()) roots.push_back(*r);
  REQUIRE_FALSE(roots.empty());
  const auto i0 = in.rules->root_inherited();
  std::vector<std::vector<AttrValue>> first;
  for (auto r : roots) first.push_back(all(c.check_attr(r, i0)));
  const auto calls = c.stats().rule_invocations;
  for (std::size_t k = 0; k < roots.size(); ++k)
    CHECK(all(c.check_attr(roots[k], i0)) == first[k]);
  CHECK(c.stats().rule_invocations == calls);
}

TEST_CASE("interleaved consumers of one key see the same sequence") {
  const auto& lang = tiny_assign();
  const auto env = parse_env("var a : A; var b : A; var c : A; var d : B;");
  Instance in(lang, env, lang.lex("a = d ; b = c ;"), 2);
  AttrChecker c(*in.reach, *in.rules);
  std::vector<EdgeId> roots;
  while (auto r = in.reach->next_root_edge()) roots.push_back(*r);
  const auto i0 = in.rules->root_inherited();
  for (auto r : roots) {
    auto s1 = c.check_attr(r, i0);
    auto s2 = c.check_attr(r, i0);
    for (;;) {
      auto a = s1.next();
      auto b = s2.next();
      CHECK(a == b);
      if (!a) break;
    }
  }
}

TEST_CASE("memoized and unmemoized runs agree; streams never repeat a value") {
  const auto& lang = minijava();
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; compared < 40 && seed < 400; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.tokens = {4, 8};
    gp.max_tokens = 10;
    gp.classes = {1, 2};
    Program p;
    try {
      p = generate_program(gp);
    } catch (const GenerationExhausted&) {
      continue;
    }
    const auto m = mutate(p.tokens, {group_ops("mix"), 1, seed}, lang, p.env);
    if (m.tokens.size() > 10) continue;
    CAPTURE(render(m.tokens));
    Instance in(lang, p.env, m.tokens, 2);
    AttrChecker memo(*in.reach, *in.rules);
    AttrChecker plain(*in.reach, *in.rules, AttrCheckOptions{false, nullptr});
    const auto i0 = in.rules->root_inherited();
    while (auto r = in.reach->next_root_edge()) {
      const auto a = all(memo.check_attr(*r, i0));
      const auto b = all(plain.check_attr(*r, i0));
      CHECK(distinct(a).size() == a.size());
      CHECK(distinct(a) == distinct(b));
    }
    ++compared;
  }
  CHECK(compared == 40);
}

TEST_CASE("pruning drops exactly the branches a full evaluation rejects") {
  const auto& lang = minijava();
  std::size_t compared = 0;
  for (std::uint64_t seed = 100; compared < 25 && seed < 600; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.tokens = {3, 7};
    gp.max_tokens = 8;
    gp.classes = {1, 2};
    Program p;
    try {
      p = generate_program(gp);
    } catch (const GenerationExhausted&) {
      continue;
    }
    const auto m = mutate(p.tokens, {group_ops("mix"), 1, seed}, lang, p.env);
    if (m.tokens.size() > 8) continue;
    CAPTURE(render(m.tokens));
    Instance in(lang, p.env, m.tokens, 1);
    NoPruning full(*in.rules);
    AttrChecker pruned(*in.reach, *in.rules);
    AttrChecker unpruned(*in.reach, full);
    const auto i0 = in.rules->root_inherited();
    while (auto r = in.reach->next_root_edge()) {
      auto a = distinct(all(pruned.check_attr(*r, i0)));
      std::unordered_set<AttrValue> b;
      for (auto& v : all(unpruned.check_attr(*r, i0)))
        if (!NoPruning::dead(v)) b.insert(v);
      CHECK(a == b);
    }
    ++compared;
  }
  CHECK(compared == 25);
}

TEST_CASE("unary cycles terminate") {
  for (const char* text : {"start S;\nS -> A\nA -> 'a'\nA -> A\n",
                           "start S;\nS -> A\nA -> A\nA -> 'a'\n"}) {
    CAPTURE(text);
    const auto g = normalize(parse_grammar(text));
    const auto a = *g.find_fixed("a");
    const auto mg = build_modgraph(std::vector<Token>{{a, "a", 0}}, g);
    Reachability r(mg, g, ReachOptions{0});
    const auto root = r.next_root_edge();
    REQUIRE(root);
    CountingRules rules;
    const auto aa = *g.find("A");
    rules.synth = [&](const Production& p, const AttrValue* l,
                      const AttrValue*) -> std::optional<AttrValue> {
      if (p.lhs == aa && p.rhs.size() == 1 && p.rhs[0] == aa)
        return l->get<int>() < 3 ? std::optional(AttrValue::make(l->get<int>() + 1))
                                 : std::nullopt;
      return *l;
    };
    AttrChecker c(r, rules);
    const auto vs = all(c.check_attr(*root, {}));
    CHECK_FALSE(vs.empty());
    CHECK(distinct(vs).count(AttrValue::make(1)) == 1);
    CHECK(distinct(vs).size() == vs.size());
  }
}

TEST_CASE("rule failures name the production") {
  const auto g = normalize(parse_grammar("start S;\nS -> 'a' 'b'\n"));
  const auto a = *g.find_fixed("a");
  const auto b = *g.find_fixed("b");
  const auto mg = build_modgraph(std::vector<Token>{{a, "a", 0}, {b, "b", 1}}, g);
  Reachability r(mg, g, ReachOptions{0});
  const auto root = r.next_root_edge();
  REQUIRE(root);
  CountingRules rules;
  rules.synth = [](const Production&, const AttrValue*,
                   const AttrValue*) -> std::optional<AttrValue> {
    throw std::runtime_error("boom");
  };
  AttrChecker c(r, rules);
  CHECK_THROWS_WITH_AS(c.first_passing(*root),
                       doctest::Contains("S -> a b"), RuleError);
}

TEST_CASE("memo growth is charged to the budget") {
  const auto& lang = minijava();
  UndirectedGraph k3{3, {{0, 1}, {0, 2}, {1, 2}}};
  const auto p = encode_mis(k3);
  Instance in(lang, p.env, p.tokens, 2);
  Budget budget(std::chrono::hours(1), 200'000);
  AttrChecker c(*in.reach, *in.rules, AttrCheckOptions{true, &budget});
  CHECK_THROWS_AS(
      {
        while (auto r = in.reach->next_root_edge()) c.first_passing(*r);
      },
      BudgetExceeded);
}
