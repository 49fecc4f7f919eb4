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

#include <chrono>

#include "ordfix/corpus.hpp"
#include "ordfix/fixer.hpp"
#include "support.hpp"

using namespace ordfix;

namespace {

FixResult run(const Frontend& lang, const TypeEnv& env, std::vector<Token> ts,
              FixLimits lim = {}, bool memoize = true) {
  FixRequest req;
  req.tokens = std::move(ts);
  req.frontend = &lang;
  req.env = &env;
  req.limits = lim;
  req.memoize = memoize;
  return fix(req);
}

TypeEnv abc_env() { return parse_env("var x : A; var y : A; var z : B;"); }

std::vector<std::string> lexemes_of(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.lexeme);
  return out;
}

}  // namespace

TEST_CASE("x = z is fixed with two edits") {
  const auto& lang = tiny_assign();
  const auto env = abc_env();
  const auto original = lang.lex("x = z");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run(lang, env, original);
  const auto secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 1.0);
  REQUIRE(r.status == FixStatus::Fixed);
  CHECK(r.weight == 2);
  CHECK(r.verified);
  CHECK(lexemes_of(r.fixed) == std::vector<std::string>{"x", "=", "y", ";"});
  REQUIRE(r.edits.size() == 2);
  CHECK(r.edits[0].pos == 2);
  CHECK(r.edits[0].op == EditOpKind::Update);
  CHECK(r.edits[0].token.lexeme == "y");
  CHECK(r.edits[1].pos == 3);
  CHECK(r.edits[1].op == EditOpKind::Insert);
  CHECK(r.edits[1].token.lexeme == ";");
  CHECK(ordfix::apply(r.edits, original) == r.fixed);
  CHECK(r.stats.root_edges == 2);
}

TEST_CASE("compilable input needs no edits") {
  const auto& lang = tiny_assign();
  const auto env = abc_env();
  for (const char* text : {"x = y ;", "z = z ;", "", "x = y ; y = x ;"}) {
    CAPTURE(text);
    const auto r = run(lang, env, lang.lex(text));
    REQUIRE(r.status == FixStatus::Fixed);
    CHECK(r.weight == 0);
    CHECK(r.edits.empty());
    CHECK(r.fixed == lang.lex(text));
    CHECK(r.verified);
  }
}

TEST_CASE("a superfluous token is deleted") {
  const auto& lang = tiny_assign();
  const auto env = abc_env();
  const auto original = lang.lex("x = y ; ;");
  const auto r = run(lang, env, original);
  REQUIRE(r.status == FixStatus::Fixed);
  CHECK(r.weight == 1);
  REQUIRE(r.edits.size() == 1);
  CHECK(r.edits[0].op == EditOpKind::Delete);
  CHECK(r.verified);
  CHECK(ordfix::apply(r.edits, original) == r.fixed);
  CHECK(oracle_min_fix(original, lang, env) == 1u);
}

TEST_CASE("minijava mutants: minimal, valid, and round-tripping") {
  const auto& lang = minijava();
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 30; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.tokens = {10, 25};
    gp.max_tokens = 30;
    const auto p = generate_program(gp);
    const std::uint32_t k = 1 + seed % 2;
    const auto m = mutate(p.tokens, {group_ops("mix"), k, seed}, lang, p.env);
    CAPTURE(render(m.tokens));
    const auto r = run(lang, p.env, m.tokens);
    REQUIRE(r.status == FixStatus::Fixed);
    CHECK(r.weight <= k);
    CHECK(r.verified);
    CHECK(r.edits.size() == r.weight);
    CHECK(ordfix::apply(r.edits, m.tokens) == r.fixed);
    CHECK(lang.check_compiles(r.fixed, p.env).ok);
    CHECK(oracle_min_fix(m.tokens, lang, p.env) == r.weight);
    ++checked;
  }
}

TEST_CASE("results do not depend on memoization") {
  const auto& lang = minijava();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenParams gp;
    gp.seed = 500 + seed;
    gp.tokens = {10, 20};
    const auto p = generate_program(gp);
    const auto m = mutate(p.tokens, {group_ops("mix"), 2, seed}, lang, p.env);
    const auto a = run(lang, p.env, m.tokens, {}, true);
    const auto b = run(lang, p.env, m.tokens, {}, false);
    CHECK(a.status == b.status);
    CHECK(a.weight == b.weight);
    CHECK(a.fixed == b.fixed);
  }
}

TEST_CASE("a cap of n edits always suffices") {
  const auto& lang = tiny_assign();
  const auto env = abc_env();
  const auto& g = lang.normalized();
  std::vector<Token> alphabet;
  for (auto s : g.vocabulary())
    alphabet.push_back({s, g.symbol(s).is_class_terminal() ? "x" : g.symbol(s).name, 0});
  alphabet.push_back(lang.make_token("z"));
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Token> ts;
    for (auto k = rng.below(9); k > 0; --k) ts.push_back(alphabet[rng.below(alphabet.size())]);
    FixLimits lim;
    lim.max_edits = static_cast<std::uint32_t>(ts.size());
    const auto r = run(lang, env, ts, lim);
    CHECK(r.status == FixStatus::Fixed);
    CHECK(r.weight <= ts.size());
    CHECK(r.verified);
  }
}

TEST_CASE("caps and budgets map to statuses") {
  const auto& lang = tiny_assign();
  const auto env = abc_env();
  FixLimits lim;
  lim.max_edits = 1;
  auto r = run(lang, env, lang.lex("x = z"), lim);
  CHECK(r.status == FixStatus::NoFixWithinCap);
  CHECK(r.edits.empty());

  const auto mis = encode_mis({4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}});
  FixLimits tight;
  tight.time_limit_seconds = 1e-4;
  tight.check_interval = 1;
  r = run(minijava(), mis.env, mis.tokens, tight);
  CHECK(r.status == FixStatus::TimeLimit);

  FixLimits small;
  small.memory_limit_bytes = 64 * 1024;
  r = run(minijava(), mis.env, mis.tokens, small);
  CHECK(r.status == FixStatus::MemoryLimit);
  CHECK(r.stats.memory_bytes > 0);
}

TEST_CASE("malformed requests are rejected") {
  const auto& lang = tiny_assign();
  const auto env = abc_env();
  FixRequest req;
  req.tokens = lang.lex("x = z");
  CHECK_THROWS_AS(fix(req), FixRequestError);
  req.frontend = &lang;
  req.env = &env;
  req.limits.max_edits = 3 + 8 + 1;
  CHECK_THROWS_AS(fix(req), FixRequestError);
  req.limits.max_edits.reset();
  req.limits.time_limit_seconds = 0;
  CHECK_THROWS_AS(fix(req), FixRequestError);
  req.limits.time_limit_seconds = 1;
  req.tokens = minijava().lex("while");
  CHECK_THROWS_AS(fix(req), FixRequestError);
}

TEST_CASE("apply validates scripts") {
  const auto& lang = tiny_assign();
  const auto t = lang.lex("x = z");
  const auto semi = lang.make_token(";");
  const auto y = lang.make_token("y");
  CHECK(ordfix::apply({}, t) == t);
  CHECK(ordfix::apply({{3, EditOpKind::Insert, semi}}, t) == lang.lex("x = z ;"));
  CHECK(ordfix::apply({{0, EditOpKind::Delete, t[0]}}, t) == lang.lex("= z"));
  CHECK(ordfix::apply({{0, EditOpKind::Insert, y}, {0, EditOpKind::Update, y}}, t) ==
        lang.lex("y y = z"));
  CHECK_THROWS_AS(ordfix::apply({{4, EditOpKind::Insert, semi}}, t), std::invalid_argument);
  CHECK_THROWS_AS(ordfix::apply({{3, EditOpKind::Delete, semi}}, t), std::invalid_argument);
  CHECK_THROWS_AS(ordfix::apply({{2, EditOpKind::Update, y}, {1, EditOpKind::Update, y}}, t),
                  std::invalid_argument);
  CHECK_THROWS_AS(ordfix::apply({{1, EditOpKind::Delete, t[1]}, {1, EditOpKind::Update, y}}, t),
                  std::invalid_argument);
  CHECK_THROWS_AS(ordfix::apply({{1, EditOpKind::Update, y}, {1, EditOpKind::Insert, y}}, t),
                  std::invalid_argument);
}

TEST_CASE("status names") {
  CHECK(std::string(to_string(FixStatus::Fixed)) == "fixed");
  CHECK(std::string(to_string(FixStatus::NoFixWithinCap)) == "no-fix-within-cap");
  CHECK(std::string(to_string(FixStatus::TimeLimit)) == "time-limit");
  CHECK(std::string(to_string(FixStatus::MemoryLimit)) == "memory-limit");
  CHECK(std::string(to_string(EditOpKind::Update)) == "update");
}
