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

#include "ordfix/corpus.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace ordfix {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Generation

namespace {

constexpr std::string_view kClassPool[] = {"Node", "Edge", "List", "Item",
                                           "Tree", "Pair", "Box",  "Cell",
                                           "Link", "Unit"};
constexpr std::string_view kFieldPool[] = {"next", "val", "left",
                                           "right", "head", "tail"};
constexpr std::string_view kMethodPool[] = {"get",  "put",  "make",
                                            "copy", "link", "find"};
constexpr std::string_view kParamPool[] = {"p", "q", "r"};
constexpr std::string_view kLocalPool[] = {"a", "b", "c", "x",
                                           "y", "z", "t", "u"};

struct Backtrack {};

TypeEnv random_env(const GenParams& gp, Rng& rng) {
  auto count = [&](std::pair<int, int> r) {
    return static_cast<std::size_t>(rng.between(r.first, r.second));
  };
  std::vector<std::string> names(std::begin(kClassPool), std::end(kClassPool));
  rng.shuffle(names);
  names.resize(std::min(count(gp.classes), names.size()));
  std::vector<std::string> types{std::string(TypeEnv::kObject)};
  types.insert(types.end(), names.begin(), names.end());
  auto any_type = [&] { return types[rng.below(types.size())]; };
  auto proper_type = [&] { return names[rng.below(names.size())]; };

  TypeEnv env;
  for (std::size_t i = 0; i < names.size(); ++i) {
    ClassDecl c;
    c.name = names[i];
    if (i > 0 && rng.chance(1, 2)) c.super = names[rng.below(i)];
    std::vector<std::string> fs(std::begin(kFieldPool), std::end(kFieldPool));
    rng.shuffle(fs);
    fs.resize(std::min(count(gp.fields), fs.size()));
    for (auto& f : fs) c.fields.emplace_back(f, any_type());
    std::vector<std::string> ms(std::begin(kMethodPool), std::end(kMethodPool));
    rng.shuffle(ms);
    ms.resize(std::min(count(gp.methods), ms.size()));
    for (auto& m : ms) {
      MethodDecl d{m, any_type(), {}};
      for (std::size_t k = count(gp.params); k > 0; --k)
        d.params.push_back(any_type());
      c.methods.push_back(std::move(d));
    }
    for (std::size_t k = rng.below(2); k > 0; --k) c.ctor.push_back(any_type());
    env.add_class(std::move(c));
  }
  std::vector<std::string> ps(std::begin(kParamPool), std::end(kParamPool));
  rng.shuffle(ps);
  ps.resize(std::min(count(gp.env_vars), ps.size()));
  for (auto& p : ps) env.add_var(p, proper_type());
  env.set_return_type(any_type());
  return env;
}

class BodyGen {
 public:
  BodyGen(const TypeEnv& env, Rng& rng, int max_backtracks)
      : env_(env), rng_(rng), budget_(max_backtracks) {
    scope_.assign(env.vars().begin(), env.vars().end());
    classes_.emplace_back(TypeEnv::kObject);
    for (const auto& c : env.classes()) classes_.push_back(c.name);
  }

  std::vector<std::string> body(std::size_t target) {
    while (out_.size() < target) attempt([&] { stmt(); });
    return out_;
  }

 private:
  // Runs f; on Backtrack restores the output and scope and reports failure.
  template <class F>
  bool attempt(F&& f) {
    const auto n_out = out_.size();
    const auto n_scope = scope_.size();
    const auto depth = depth_;
    const auto nest = nest_;
    try {
      f();
      return true;
    } catch (const Backtrack&) {
      out_.resize(n_out);
      scope_.resize(n_scope);
      depth_ = depth;
      nest_ = nest;
      if (--budget_ < 0) throw GenerationExhausted("too many backtracks");
      return false;
    }
  }

  void emit(std::string_view s) { out_.emplace_back(s); }

  bool declared(std::string_view n) const {
    for (const auto& v : scope_)
      if (v.first == n) return true;
    return false;
  }

  std::vector<std::pair<std::string, std::string>> visible_fields(
      std::string_view cls) const {
    std::vector<std::pair<std::string, std::string>> out;
    std::unordered_set<std::string> hidden;
    for (const auto* c = env_.find_class(cls); c; c = env_.find_class(c->super))
      for (const auto& f : c->fields)
        if (hidden.insert(f.first).second) out.push_back(f);
    return out;
  }
  std::vector<const MethodDecl*> visible_methods(std::string_view cls) const {
    std::vector<const MethodDecl*> out;
    std::unordered_set<std::string> hidden;
    for (const auto* c = env_.find_class(cls); c; c = env_.find_class(c->super))
      for (const auto& m : c->methods)
        if (hidden.insert(m.name).second) out.push_back(&m);
    return out;
  }

  enum class Kind { Decl, Assign, FieldAssign, Call, New, If, While, Break, Return };

  void stmt() {
    static constexpr std::pair<Kind, int> weights[] = {
        {Kind::Decl, 4}, {Kind::Assign, 3}, {Kind::FieldAssign, 2},
        {Kind::Call, 3}, {Kind::New, 1},    {Kind::If, 1},
        {Kind::While, 1}, {Kind::Break, 1}, {Kind::Return, 1}};
    int total = 0;
    for (auto [k, w] : weights) total += w;
    auto r = static_cast<int>(rng_.below(static_cast<std::uint64_t>(total)));
    Kind kind = Kind::Decl;
    for (auto [k, w] : weights) {
      if (r < w) {
        kind = k;
        break;
      }
      r -= w;
    }
    switch (kind) {
      case Kind::Decl: {
        std::vector<std::string_view> free;
        for (auto n : kLocalPool)
          if (!declared(n)) free.push_back(n);
        if (free.empty()) throw Backtrack{};
        const auto& type = classes_[rng_.below(classes_.size())];
        const auto name = free[rng_.below(free.size())];
        emit(type);
        emit(name);
        emit(";");
        scope_.emplace_back(std::string(name), type);
        return;
      }
      case Kind::Assign: {
        if (scope_.empty()) throw Backtrack{};
        const auto v = scope_[rng_.below(scope_.size())];
        emit(v.first);
        emit("=");
        expr(v.second, 0);
        emit(";");
        return;
      }
      case Kind::FieldAssign: {
        const auto [recv, fields] = receiver_with_fields();
        const auto& f = fields[rng_.below(fields.size())];
        emit(recv);
        emit(".");
        emit(f.first);
        emit("=");
        expr(f.second, 0);
        emit(";");
        return;
      }
      case Kind::Call:
        call(nullptr, 0);
        emit(";");
        return;
      case Kind::New:
        construct(nullptr, 0);
        emit(";");
        return;
      case Kind::If:
      case Kind::While: {
        if (nest_ >= 2) throw Backtrack{};
        const bool loop = kind == Kind::While;
        emit(loop ? "while" : "if");
        emit("(");
        condition();
        emit(")");
        ++nest_;
        if (loop) ++depth_;
        block();
        if (!loop) {
          emit("else");
          block();
        }
        if (loop) --depth_;
        --nest_;
        return;
      }
      case Kind::Break:
        if (depth_ == 0) throw Backtrack{};
        emit("break");
        emit(";");
        return;
      case Kind::Return:
        emit("return");
        expr(env_.return_type(), 0);
        emit(";");
        return;
    }
  }

  void block() {
    emit("{");
    const auto saved = scope_.size();
    for (auto k = rng_.below(3); k > 0; --k) attempt([&] { stmt(); });
    scope_.resize(saved);
    emit("}");
  }

  void condition() {
    prim_any();
    emit("==");
    prim_any();
  }

  void prim_any() {
    if (!scope_.empty() && !rng_.chance(1, 5)) {
      emit(scope_[rng_.below(scope_.size())].first);
      return;
    }
    emit("null");
  }

  std::pair<std::string, std::vector<std::pair<std::string, std::string>>>
  receiver_with_fields() {
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < scope_.size(); ++i)
      if (!visible_fields(scope_[i].second).empty()) ok.push_back(i);
    if (ok.empty()) throw Backtrack{};
    const auto& v = scope_[ok[rng_.below(ok.size())]];
    return {v.first, visible_fields(v.second)};
  }

  void args(const std::vector<std::string>& params, int d) {
    emit("(");
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i) emit(",");
      expr(params[i], d + 1);
    }
    emit(")");
  }

  // `want` null: any result type.
  void call(const std::string* want, int d) {
    std::vector<std::pair<std::string, const MethodDecl*>> ok;
    for (const auto& [name, type] : scope_)
      for (const auto* m : visible_methods(type))
        if ((!want || env_.is_subtype(m->return_type, *want)) &&
            (d < 2 || m->params.empty()))
          ok.emplace_back(name, m);
    if (ok.empty()) throw Backtrack{};
    const auto& [recv, m] = ok[rng_.below(ok.size())];
    emit(recv);
    emit(".");
    emit(m->name);
    args(m->params, d);
  }

  void construct(const std::string* want, int d) {
    std::vector<std::string> ok;
    for (const auto& c : classes_)
      if ((!want || env_.is_subtype(c, *want)) &&
          (d < 2 || env_.ctor(c)->empty()))
        ok.push_back(c);
    if (ok.empty()) throw Backtrack{};
    const auto cls = ok[rng_.below(ok.size())];
    emit("new");
    emit(cls);
    args(*env_.ctor(cls), d);
  }

  void expr(const std::string& want, int d) {
    enum Opt { Var, Null, New, Field, Call, Paren };
    std::vector<Opt> opts{Var, Var, Var, New, Field, Call};
    if (rng_.chance(1, 6)) opts.push_back(Null);
    if (d < 1 && rng_.chance(1, 8)) opts.push_back(Paren);
    rng_.shuffle(opts);
    for (auto o : opts) {
      const bool done = attempt([&] {
        switch (o) {
          case Var: {
            std::vector<std::string> ok;
            for (const auto& [n, t] : scope_)
              if (env_.is_subtype(t, want)) ok.push_back(n);
            if (ok.empty()) throw Backtrack{};
            emit(ok[rng_.below(ok.size())]);
            return;
          }
          case Null:
            emit("null");
            return;
          case New:
            construct(&want, d);
            return;
          case Field: {
            std::vector<std::pair<std::string, std::string>> ok;
            for (const auto& [n, t] : scope_)
              for (const auto& [f, ft] : visible_fields(t))
                if (env_.is_subtype(ft, want)) ok.emplace_back(n, f);
            if (ok.empty()) throw Backtrack{};
            const auto& [n, f] = ok[rng_.below(ok.size())];
            emit(n);
            emit(".");
            emit(f);
            return;
          }
          case Call:
            call(&want, d);
            return;
          case Paren:
            emit("(");
            expr(want, d + 1);
            emit(")");
            return;
        }
      });
      if (done) return;
    }
    throw Backtrack{};
  }

  const TypeEnv& env_;
  Rng& rng_;
  int budget_;
  std::vector<std::pair<std::string, std::string>> scope_;
  std::vector<std::string> classes_;
  std::vector<std::string> out_;
  std::uint32_t depth_ = 0;
  int nest_ = 0;
};

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ' ';
    s += p;
  }
  return s;
}

}  // namespace

Program generate_program(const GenParams& gp) {
  if (gp.classes.first < 1 || gp.classes.first > gp.classes.second ||
      gp.tokens.first < 0 || gp.tokens.first > gp.tokens.second ||
      gp.fields.first > gp.fields.second ||
      gp.methods.first > gp.methods.second ||
      gp.params.first > gp.params.second ||
      gp.env_vars.first > gp.env_vars.second)
    throw std::invalid_argument("empty generation parameter range");
  const auto& lang = minijava();
  for (int attempt = 0; attempt < gp.max_attempts; ++attempt) {
    Rng rng(attempt == 0 ? gp.seed : derive_seed(gp.seed, attempt));
    Program p;
    p.env = random_env(gp, rng);
    const auto target =
        static_cast<std::size_t>(rng.between(gp.tokens.first, gp.tokens.second));
    std::vector<std::string> body;
    try {
      body = BodyGen(p.env, rng, gp.max_backtracks).body(target);
    } catch (const GenerationExhausted&) {
      continue;
    }
    if (gp.max_tokens > 0 && body.size() > static_cast<std::size_t>(gp.max_tokens))
      continue;
    p.tokens = lang.lex(join(body));
    const auto c = lang.check_compiles(p.tokens, p.env);
    if (!c.ok)
      throw std::logic_error("generated program does not compile: " +
                             c.diagnostic + "\n" + render(p.tokens));
    return p;
  }
  throw GenerationExhausted("no program generated for seed " +
                            std::to_string(gp.seed));
}

// ---------------------------------------------------------------------------
// Mutation

std::vector<int> group_ops(std::string_view group) {
  if (group == "syn") return {1, 2, 3, 4};
  if (group == "sem") return {8};
  if (group == "mix") return {1, 2, 3, 4, 5, 6, 7, 8};
  throw std::invalid_argument("unknown mutation group '" + std::string(group) +
                              "' (expected syn, sem or mix)");
}

Mutant mutate(std::span<const Token> tokens, const MutationSpec& spec,
              const Frontend& lang, const TypeEnv& env) {
  if (spec.count < 1) throw std::invalid_argument("mutation count must be >= 1");
  if (spec.ops.empty()) throw std::invalid_argument("empty operator set");
  for (int op : spec.ops)
    if (op < 1 || op > 8)
      throw std::invalid_argument("mutation operators are M.1 to M.8");

  const Grammar& g = lang.grammar();
  std::vector<Token> fixed_vocab;
  for (auto s : g.vocabulary())
    if (!g.symbol(s).is_class_terminal())
      fixed_vocab.push_back(Token{s, g.symbol(s).name, 0});
  const auto id = g.identifier_terminal();

  Rng rng(spec.seed);
  Mutant m{{tokens.begin(), tokens.end()}, {}};
  auto& ts = m.tokens;
  auto is_ident = [&](const Token& t) { return id && t.terminal == *id; };
  auto positions = [&](bool ident) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < ts.size(); ++i)
      if (is_ident(ts[i]) == ident) out.push_back(i);
    return out;
  };
  auto program_names = [&] {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& t : ts)
      if (is_ident(t) && seen.insert(t.lexeme).second) out.push_back(t.lexeme);
    return out;
  };
  auto ident = [&](const std::string& name) {
    return Token{*id, name, 0};
  };

  for (std::uint32_t done = 0; done < spec.count;) {
    bool applied = false;
    for (int tries = 0; tries < 64 && !applied; ++tries) {
      const int op = spec.ops[rng.below(spec.ops.size())];
      const bool on_ident = op >= 5;
      if (on_ident && !id) continue;
      const auto pos = positions(on_ident);
      std::uint32_t at = 0;
      switch (op) {
        case 1: {
          at = static_cast<std::uint32_t>(rng.below(ts.size() + 1));
          ts.insert(ts.begin() + at, fixed_vocab[rng.below(fixed_vocab.size())]);
          break;
        }
        case 5: {
          at = static_cast<std::uint32_t>(rng.below(ts.size() + 1));
          auto names = program_names();
          const auto name = names.empty() ? fresh_identifier(env, ts)
                                          : names[rng.below(names.size())];
          ts.insert(ts.begin() + at, ident(name));
          break;
        }
        case 2:
        case 6:
          if (pos.empty()) continue;
          at = pos[rng.below(pos.size())];
          ts.erase(ts.begin() + at);
          break;
        case 3:
        case 7:
          if (pos.empty()) continue;
          at = pos[rng.below(pos.size())];
          ts.insert(ts.begin() + at + 1, ts[at]);
          break;
        case 4: {
          if (pos.empty()) continue;
          at = pos[rng.below(pos.size())];
          std::vector<const Token*> others;
          for (const auto& t : fixed_vocab)
            if (!(t == ts[at])) others.push_back(&t);
          if (others.empty()) continue;
          ts[at] = *others[rng.below(others.size())];
          break;
        }
        case 8: {
          if (pos.empty()) continue;
          at = pos[rng.below(pos.size())];
          std::vector<std::string> names;
          std::unordered_set<std::string> seen;
          for (auto& n : env.names())
            if (seen.insert(n).second) names.push_back(n);
          for (auto& n : program_names())
            if (seen.insert(n).second) names.push_back(n);
          std::erase(names, ts[at].lexeme);
          if (names.empty()) continue;
          ts[at] = ident(names[rng.below(names.size())]);
          break;
        }
      }
      m.mutations.push_back({op, at});
      applied = true;
    }
    if (!applied)
      throw MutationError("no applicable mutation operator for this program");
    ++done;
  }
  for (std::uint32_t i = 0; i < ts.size(); ++i) ts[i].position = i;
  return m;
}

// ---------------------------------------------------------------------------
// Independent sets

void UndirectedGraph::validate() const {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw std::invalid_argument("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loop");
    if (!seen.insert(std::minmax(a, b)).second)
      throw std::invalid_argument("duplicate edge");
  }
}

Program encode_mis(const UndirectedGraph& g) {
  g.validate();
  Program p;
  p.env = parse_env(
      "class InMIS : Object { method Object addEdge(OutMIS); }\n"
      "class OutMIS : Object { method Object addEdge(Object); }\n");
  std::string text;
  for (std::uint32_t i = 0; i < g.n; ++i)
    text += "InMIS v" + std::to_string(i) + ";\n";
  for (auto [x, y] : g.edges)
    for (std::uint32_t k = 0; k < g.n; ++k)
      text += "v" + std::to_string(x) + ".addEdge(v" + std::to_string(y) + ");\n";
  p.tokens = minijava().lex(text);
  return p;
}

std::uint32_t max_independent_set(const UndirectedGraph& g) {
  g.validate();
  if (g.n > 20) throw std::invalid_argument("graph too large for exhaustive MIS");
  std::uint32_t best = 0;
  for (std::uint32_t s = 0; s < (1u << g.n); ++s) {
    bool ok = true;
    for (auto [a, b] : g.edges)
      if ((s >> a & 1u) && (s >> b & 1u)) {
        ok = false;
        break;
      }
    if (ok) best = std::max<std::uint32_t>(best, std::popcount(s));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Oracle

std::optional<std::uint32_t> oracle_min_fix(std::span<const Token> tokens,
                                            const Frontend& lang,
                                            const TypeEnv& env,
                                            const OracleOptions& opt) {
  const Grammar& g = lang.grammar();
  std::vector<Token> alphabet;
  for (auto s : g.vocabulary())
    if (!g.symbol(s).is_class_terminal())
      alphabet.push_back(Token{s, g.symbol(s).name, 0});
  if (auto id = g.identifier_terminal();
      id && std::find(g.vocabulary().begin(), g.vocabulary().end(), *id) !=
                g.vocabulary().end()) {
    std::unordered_set<std::string> seen;
    auto add = [&](const std::string& n) {
      if (seen.insert(n).second) alphabet.push_back(Token{*id, n, 0});
    };
    for (const auto& n : env.names()) add(n);
    for (const auto& t : tokens)
      if (t.terminal == *id) add(t.lexeme);
    add(fresh_identifier(env, tokens));
  }

  std::uint64_t checks = 0;
  auto check = [&](const std::vector<Token>& ts) {
    if (++checks > opt.check_cap)
      throw OracleCapExceeded("oracle exceeded " +
                              std::to_string(opt.check_cap) + " checks");
    return lang.check_compiles(ts, env);
  };
  auto key = [](const std::vector<Token>& ts) {
    std::string k;
    for (const auto& t : ts) {
      k += std::to_string(t.terminal);
      k += ':';
      k += t.lexeme;
      k += ' ';
    }
    return k;
  };

  struct State {
    std::vector<Token> tokens;
    std::size_t horizon;
  };
  std::vector<Token> start(tokens.begin(), tokens.end());
  const auto r0 = check(start);
  if (r0.ok) return 0;
  std::vector<State> level{{start, r0.horizon}};
  std::unordered_set<std::string> visited{key(start)};

  for (std::uint32_t k = 1; k <= opt.k_max; ++k) {
    const bool last = k == opt.k_max;
    std::vector<State> next;
    std::vector<Token> cand;
    // Returns true when cand compiles.
    auto consider = [&] {
      if (!last && !visited.insert(key(cand)).second) return false;
      const auto r = check(cand);
      if (r.ok) return true;
      if (!last) next.push_back({cand, r.horizon});
      return false;
    };
    for (const auto& s : level) {
      const auto& ts = s.tokens;
      // A fix must touch the prefix the checker examined.
      const std::size_t h = std::min(s.horizon, ts.size());
      for (std::size_t v = 0; v <= h; ++v)
        for (const auto& a : alphabet) {
          cand = ts;
          cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(v), a);
          if (consider()) return k;
        }
      for (std::size_t i = 0; i <= h && i < ts.size(); ++i) {
        cand = ts;
        cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(i));
        if (consider()) return k;
        for (const auto& a : alphabet) {
          if (a == ts[i]) continue;
          cand = ts;
          cand[i] = a;
          if (consider()) return k;
        }
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

}  // namespace ordfix
