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

#include "ordfix/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

namespace ordfix {

GrammarError::GrammarError(const std::string& what, std::size_t line,
                           std::size_t column)
    : std::runtime_error(line == 0 ? what
                                   : std::to_string(line) + ":" +
                                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Grammar

std::span<const ProductionId> Grammar::by_lhs(SymbolId s) const {
  return s < by_lhs_.size() ? std::span<const ProductionId>(by_lhs_[s])
                            : std::span<const ProductionId>();
}
std::span<const ProductionId> Grammar::by_first(SymbolId s) const {
  return s < by_first_.size() ? std::span<const ProductionId>(by_first_[s])
                              : std::span<const ProductionId>();
}
std::span<const ProductionId> Grammar::by_second(SymbolId s) const {
  return s < by_second_.size() ? std::span<const ProductionId>(by_second_[s])
                               : std::span<const ProductionId>();
}

std::optional<SymbolId> Grammar::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<SymbolId> Grammar::find_fixed(std::string_view lexeme) const {
  auto it = fixed_by_lexeme_.find(std::string(lexeme));
  if (it == fixed_by_lexeme_.end()) return std::nullopt;
  return it->second;
}

std::optional<SymbolId> Grammar::identifier_terminal() const {
  for (const auto& s : symbols_)
    if (s.is_terminal() && s.terminal_class == TerminalClass::Identifier)
      return s.id;
  return std::nullopt;
}

std::optional<SymbolId> Grammar::literal_terminal() const {
  for (const auto& s : symbols_)
    if (s.is_terminal() && s.terminal_class == TerminalClass::Literal)
      return s.id;
  return std::nullopt;
}

bool Grammar::is_normalized() const {
  return std::all_of(productions_.begin(), productions_.end(),
                     [](const Production& p) { return p.rhs.size() <= 2; });
}

void Grammar::index() {
  const auto n = symbols_.size();
  by_lhs_.assign(n, {});
  by_first_.assign(n, {});
  by_second_.assign(n, {});
  by_name_.clear();
  fixed_by_lexeme_.clear();
  for (const auto& s : symbols_) {
    by_name_.emplace(s.kind == SymbolKind::Terminal &&
                             s.terminal_class == TerminalClass::Fixed
                         ? "'" + s.name + "'"
                         : s.name,
                     s.id);
    if (s.is_terminal() && s.terminal_class == TerminalClass::Fixed)
      fixed_by_lexeme_.emplace(s.name, s.id);
  }
  std::vector<bool> used(n, false);
  for (const auto& p : productions_) {
    by_lhs_[p.lhs].push_back(p.id);
    if (p.rhs.size() == 2) {
      by_first_[p.rhs[0]].push_back(p.id);
      by_second_[p.rhs[1]].push_back(p.id);
    } else if (p.rhs.size() == 1) {
      by_first_[p.rhs[0]].push_back(p.id);
    }
    for (auto s : p.rhs) used[s] = true;
  }
  vocabulary_.clear();
  for (const auto& s : symbols_)
    if (s.is_terminal() && used[s.id]) vocabulary_.push_back(s.id);
}

std::string Grammar::to_text() const {
  std::ostringstream out;
  out << "start " << symbols_[start_].name << ";\n";
  for (const auto& s : symbols_) {
    if (!s.is_class_terminal()) continue;
    out << "terminal " << s.name << " : "
        << (s.terminal_class == TerminalClass::Identifier ? "identifier"
                                                          : "literal")
        << ";\n";
  }
  for (const auto& p : productions_) {
    out << symbols_[p.lhs].name << " ->";
    if (p.rhs.empty()) out << " .";
    for (auto r : p.rhs) {
      const auto& s = symbols_[r];
      if (s.is_terminal() && s.terminal_class == TerminalClass::Fixed)
        out << " '" << s.name << "'";
      else
        out << " " << s.name;
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Builder

SymbolId Grammar::Builder::add(std::string_view name, SymbolKind kind,
                               TerminalClass cls) {
  for (const auto& s : g_.symbols_) {
    if (s.name != name) continue;
    const bool fixed_a =
        s.is_terminal() && s.terminal_class == TerminalClass::Fixed;
    const bool fixed_b =
        kind == SymbolKind::Terminal && cls == TerminalClass::Fixed;
    if (fixed_a != fixed_b) continue;  // 'S' and S are different symbols
    if (s.kind != kind || s.terminal_class != cls)
      throw GrammarError("symbol '" + std::string(name) +
                             "' redeclared with a different kind",
                         0, 0);
    return s.id;
  }
  Symbol s;
  s.id = static_cast<SymbolId>(g_.symbols_.size());
  s.name = std::string(name);
  s.kind = kind;
  s.terminal_class = cls;
  g_.symbols_.push_back(std::move(s));
  return g_.symbols_.back().id;
}

SymbolId Grammar::Builder::terminal(std::string_view lexeme) {
  return add(lexeme, SymbolKind::Terminal, TerminalClass::Fixed);
}

SymbolId Grammar::Builder::class_terminal(std::string_view name,
                                          TerminalClass cls) {
  return add(name, SymbolKind::Terminal, cls);
}

SymbolId Grammar::Builder::nonterminal(std::string_view name) {
  return add(name, SymbolKind::Nonterminal, TerminalClass::Fixed);
}

ProductionId Grammar::Builder::production(SymbolId lhs,
                                          std::vector<SymbolId> rhs) {
  if (g_.symbols_.at(lhs).is_terminal())
    throw GrammarError("terminal on left-hand side", 0, 0);
  for (const auto& p : g_.productions_)
    if (p.lhs == lhs && p.rhs == rhs)
      throw GrammarError(
          "duplicate production for '" + g_.symbols_[lhs].name + "'", 0, 0);
  Production p;
  p.id = static_cast<ProductionId>(g_.productions_.size());
  p.lhs = lhs;
  p.rhs = std::move(rhs);
  p.origin = {p.id, 0};
  g_.productions_.push_back(std::move(p));
  return g_.productions_.back().id;
}

Grammar Grammar::Builder::build() && {
  if (start_ == kNoSymbol) throw GrammarError("no start symbol", 0, 0);
  if (g_.symbols_.at(start_).is_terminal())
    throw GrammarError("start symbol must be a nonterminal", 0, 0);
  std::vector<bool> defined(g_.symbols_.size(), false);
  for (const auto& p : g_.productions_) defined[p.lhs] = true;
  for (const auto& s : g_.symbols_)
    if (!s.is_terminal() && !defined[s.id])
      throw GrammarError("undefined symbol '" + s.name + "'", 0, 0);
  g_.start_ = start_;
  g_.index();
  return std::move(g_);
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class GrammarLexer {
 public:
  GrammarLexer(std::string_view line, std::size_t lineno)
      : s_(line), lineno_(lineno) {}

  enum class Kind { End, Name, Quoted, Arrow, Dot, Colon, Semi };
  struct Tok {
    Kind kind;
    std::string text;
    std::size_t column;
  };

  Tok next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
    const std::size_t col = i_ + 1;
    if (i_ >= s_.size() || s_[i_] == '#') return {Kind::End, "", col};
    const char c = s_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      Tok t{Kind::Name, std::string(s_.substr(i_, j - i_)), col};
      i_ = j;
      return t;
    }
    if (c == '\'') {
      const auto close = s_.find('\'', i_ + 1);
      if (close == std::string_view::npos || close == i_ + 1)
        throw GrammarError("unterminated or empty quoted terminal", lineno_,
                           col);
      Tok t{Kind::Quoted, std::string(s_.substr(i_ + 1, close - i_ - 1)), col};
      i_ = close + 1;
      return t;
    }
    if (s_.substr(i_, 2) == "->") {
      i_ += 2;
      return {Kind::Arrow, "->", col};
    }
    ++i_;
    switch (c) {
      case '.': return {Kind::Dot, ".", col};
      case ':': return {Kind::Colon, ":", col};
      case ';': return {Kind::Semi, ";", col};
      default:
        throw GrammarError(std::string("unexpected character '") + c + "'",
                           lineno_, col);
    }
  }

 private:
  std::string_view s_;
  std::size_t lineno_;
  std::size_t i_ = 0;
};

struct PendingProduction {
  std::string lhs;
  std::vector<GrammarLexer::Tok> rhs;
  std::size_t line;
  std::size_t column;
};

}  // namespace

Grammar parse_grammar(std::string_view text) {
  using Kind = GrammarLexer::Kind;
  std::vector<PendingProduction> pending;
  std::vector<std::tuple<std::string, TerminalClass, std::size_t>> classes;
  std::vector<std::string> fixed_decls;
  std::optional<std::pair<std::string, std::size_t>> start;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++lineno;

    GrammarLexer lex(line, lineno);
    auto t = lex.next();
    if (t.kind == Kind::End) continue;
    auto expect = [&](Kind k, const char* what) {
      auto u = lex.next();
      if (u.kind != k)
        throw GrammarError(std::string("expected ") + what, lineno, u.column);
      return u;
    };
    auto expect_end = [&] {
      auto u = lex.next();
      if (u.kind != Kind::End)
        throw GrammarError("trailing input '" + u.text + "'", lineno,
                           u.column);
    };

    if (t.kind == Kind::Name && t.text == "start") {
      auto name = expect(Kind::Name, "start symbol name");
      expect(Kind::Semi, "';'");
      expect_end();
      if (start) throw GrammarError("duplicate start declaration", lineno, 1);
      start = {name.text, lineno};
      continue;
    }
    if (t.kind == Kind::Name && t.text == "terminal") {
      auto u = lex.next();
      if (u.kind == Kind::Quoted) {
        while (u.kind == Kind::Quoted) {
          fixed_decls.push_back(u.text);
          u = lex.next();
        }
        if (u.kind != Kind::Semi)
          throw GrammarError("expected ';'", lineno, u.column);
        expect_end();
        continue;
      }
      if (u.kind != Kind::Name)
        throw GrammarError("expected terminal name", lineno, u.column);
      expect(Kind::Colon, "':'");
      auto cls = expect(Kind::Name, "terminal class");
      TerminalClass tc;
      if (cls.text == "identifier")
        tc = TerminalClass::Identifier;
      else if (cls.text == "literal")
        tc = TerminalClass::Literal;
      else
        throw GrammarError("unknown terminal class '" + cls.text + "'",
                           lineno, cls.column);
      expect(Kind::Semi, "';'");
      expect_end();
      classes.emplace_back(u.text, tc, lineno);
      continue;
    }
    if (t.kind != Kind::Name)
      throw GrammarError("expected declaration or production", lineno,
                         t.column);
    expect(Kind::Arrow, "'->'");
    PendingProduction p{t.text, {}, lineno, t.column};
    bool epsilon = false;
    for (auto u = lex.next(); u.kind != Kind::End; u = lex.next()) {
      if (u.kind == Kind::Dot) {
        epsilon = true;
        continue;
      }
      if (u.kind != Kind::Name && u.kind != Kind::Quoted)
        throw GrammarError("unexpected '" + u.text + "' in production",
                           lineno, u.column);
      if (epsilon)
        throw GrammarError("symbols after '.' in empty production", lineno,
                           u.column);
      p.rhs.push_back(u);
    }
    if (!epsilon && p.rhs.empty())
      throw GrammarError("empty right-hand side; write '.' for epsilon",
                         lineno, t.column);
    pending.push_back(std::move(p));
  }

  if (!start) throw GrammarError("no start symbol", 0, 0);

  Grammar::Builder b;
  std::unordered_map<std::string, SymbolId> class_ids;
  for (const auto& [name, tc, line] : classes) {
    if (class_ids.count(name))
      throw GrammarError("duplicate terminal declaration '" + name + "'", line,
                         1);
    class_ids[name] = b.class_terminal(name, tc);
  }
  for (const auto& f : fixed_decls) b.terminal(f);
  std::unordered_map<std::string, SymbolId> nts;
  for (const auto& p : pending) {
    if (class_ids.count(p.lhs))
      throw GrammarError("terminal '" + p.lhs + "' on left-hand side", p.line,
                         p.column);
    if (!nts.count(p.lhs)) nts[p.lhs] = b.nonterminal(p.lhs);
  }
  std::set<std::pair<SymbolId, std::vector<SymbolId>>> seen;
  for (const auto& p : pending) {
    std::vector<SymbolId> rhs;
    for (const auto& t : p.rhs) {
      if (t.kind == Kind::Quoted) {
        rhs.push_back(b.terminal(t.text));
      } else if (auto c = class_ids.find(t.text); c != class_ids.end()) {
        rhs.push_back(c->second);
      } else if (auto n = nts.find(t.text); n != nts.end()) {
        rhs.push_back(n->second);
      } else {
        throw GrammarError("undefined symbol '" + t.text + "'", p.line,
                           t.column);
      }
    }
    const auto lhs = nts.at(p.lhs);
    if (!seen.emplace(lhs, rhs).second)
      throw GrammarError("duplicate production for '" + p.lhs + "'", p.line,
                         p.column);
    b.production(lhs, std::move(rhs));
  }
  auto s = nts.find(start->first);
  if (s == nts.end())
    throw GrammarError("start symbol '" + start->first + "' has no production",
                       start->second, 1);
  b.set_start(s->second);
  return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Normalization

Grammar normalize(const Grammar& g) {
  Grammar out;
  out.symbols_ = g.symbols_;
  out.source_.assign(g.source_productions().begin(),
                     g.source_productions().end());
  out.start_ = g.start_;

  std::set<std::string> names;
  for (const auto& s : out.symbols_) names.insert(s.name);
  auto fresh = [&](const std::string& base) {
    std::string name = base;
    for (int k = 1; names.count(name); ++k) name = base + "_" + std::to_string(k);
    names.insert(name);
    Symbol s;
    s.id = static_cast<SymbolId>(out.symbols_.size());
    s.name = name;
    s.kind = SymbolKind::Nonterminal;
    s.fresh = true;
    out.symbols_.push_back(s);
    return s.id;
  };
  auto emit = [&](SymbolId lhs, std::vector<SymbolId> rhs, Origin origin) {
    Production p;
    p.id = static_cast<ProductionId>(out.productions_.size());
    p.lhs = lhs;
    p.rhs = std::move(rhs);
    p.origin = origin;
    out.productions_.push_back(std::move(p));
  };

  bool start_on_rhs = false;
  for (const auto& p : g.productions_)
    for (auto s : p.rhs) start_on_rhs |= (s == g.start_);
  if (start_on_rhs) {
    const auto s = fresh(g.symbols_[g.start_].name + "'");
    emit(s, {g.start_}, Origin{});
    out.start_ = s;
  }

  for (const auto& p : g.productions_) {
    if (p.rhs.size() <= 2) {
      emit(p.lhs, p.rhs, p.origin);
      continue;
    }
    const std::string base =
        g.symbols_[p.lhs].name + "~" + std::to_string(p.origin.production);
    SymbolId lhs = p.lhs;
    const auto k = p.rhs.size();
    for (std::size_t m = 0; m + 2 < k; ++m) {
      const auto next = fresh(base + "." + std::to_string(m + 1));
      emit(lhs, {p.rhs[m], next},
           Origin{p.origin.production,
                  p.origin.position + static_cast<std::uint32_t>(m)});
      lhs = next;
    }
    emit(lhs, {p.rhs[k - 2], p.rhs[k - 1]},
         Origin{p.origin.production,
                p.origin.position + static_cast<std::uint32_t>(k - 2)});
  }
  out.index();
  return out;
}

// ---------------------------------------------------------------------------
// Earley recognition

bool recognizes(const Grammar& g, std::span<const SymbolId> input) {
  const auto prods = g.productions();
  const auto nsym = g.symbols().size();

  std::vector<bool> nullable(nsym, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : prods) {
      if (nullable[p.lhs]) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(),
                      [&](SymbolId s) { return nullable[s]; })) {
        nullable[p.lhs] = true;
        changed = true;
      }
    }
  }

  struct Item {
    ProductionId prod;
    std::uint32_t dot;
    std::uint32_t origin;
    bool operator<(const Item& o) const {
      return std::tie(prod, dot, origin) < std::tie(o.prod, o.dot, o.origin);
    }
  };
  const auto n = input.size();
  std::vector<std::vector<Item>> sets(n + 1);
  std::vector<std::set<Item>> seen(n + 1);
  auto add = [&](std::size_t k, Item it) {
    if (seen[k].insert(it).second) sets[k].push_back(it);
  };
  for (auto pid : g.by_lhs(g.start())) add(0, {pid, 0, 0});

  for (std::size_t k = 0; k <= n; ++k) {
    for (std::size_t i = 0; i < sets[k].size(); ++i) {
      const Item it = sets[k][i];
      const auto& p = prods[it.prod];
      if (it.dot < p.rhs.size()) {
        const SymbolId next = p.rhs[it.dot];
        if (g.symbol(next).is_terminal()) {
          if (k < n && input[k] == next)
            add(k + 1, {it.prod, it.dot + 1, it.origin});
        } else {
          for (auto pid : g.by_lhs(next))
            add(k, {pid, 0, static_cast<std::uint32_t>(k)});
          if (nullable[next]) add(k, {it.prod, it.dot + 1, it.origin});
        }
      } else {
        // complete: advance items in the origin set waiting on p.lhs
        const auto& from = sets[it.origin];
        for (std::size_t j = 0; j < from.size(); ++j) {
          const Item w = from[j];
          const auto& q = prods[w.prod];
          if (w.dot < q.rhs.size() && q.rhs[w.dot] == p.lhs)
            add(k, {w.prod, w.dot + 1, w.origin});
        }
      }
    }
  }
  for (const auto& it : sets[n]) {
    const auto& p = prods[it.prod];
    if (p.lhs == g.start() && it.origin == 0 && it.dot == p.rhs.size())
      return true;
  }
  return false;
}

}  // namespace ordfix
