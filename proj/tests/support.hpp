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

// Brute-force helpers shared by the unit tests. None of them call into the
// reachability or attribute-checking code they are used to test.

#ifndef ORDFIX_TESTS_SUPPORT_HPP
#define ORDFIX_TESTS_SUPPORT_HPP

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ordfix/corpus.hpp"
#include "ordfix/grammar.hpp"
#include "ordfix/modgraph.hpp"
#include "ordfix/reachability.hpp"

namespace ordfix {

// Lets doctest print token streams in failed comparisons.
inline std::ostream& operator<<(std::ostream& os, const std::vector<Token>& ts) {
  os << '[';
  for (std::size_t i = 0; i < ts.size(); ++i) os << (i ? " " : "") << ts[i].lexeme;
  return os << ']';
}

}  // namespace ordfix

namespace ordfix::testing {

using Word = std::vector<SymbolId>;

/// Membership by fixpoint over span tables: derives[A][i][j] grows until
/// stable. Works on any grammar (long right-hand sides, epsilon, cycles).
inline bool derives(const Grammar& g, SymbolId start, const Word& w) {
  const std::size_t n = w.size();
  const std::size_t ns = g.symbols().size();
  auto idx = [&](SymbolId s, std::size_t i, std::size_t j) {
    return (static_cast<std::size_t>(s) * (n + 1) + i) * (n + 1) + j;
  };
  std::vector<char> d(ns * (n + 1) * (n + 1), 0);
  for (std::size_t i = 0; i < n; ++i) d[idx(w[i], i, i + 1)] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions())
      for (std::size_t i = 0; i <= n; ++i) {
        // reach[k]: vertices reachable from i after rhs[0..k)
        std::vector<char> cur(n + 1, 0);
        cur[i] = 1;
        for (SymbolId s : p.rhs) {
          std::vector<char> next(n + 1, 0);
          for (std::size_t a = i; a <= n; ++a)
            if (cur[a])
              for (std::size_t b = a; b <= n; ++b)
                if (d[idx(s, a, b)]) next[b] = 1;
          cur.swap(next);
        }
        for (std::size_t j = i; j <= n; ++j)
          if (cur[j] && !d[idx(p.lhs, i, j)]) {
            d[idx(p.lhs, i, j)] = 1;
            changed = true;
          }
      }
  }
  return d[idx(start, 0, n)];
}

template <class T>
std::size_t levenshtein(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    prev.swap(cur);
  }
  return prev[b.size()];
}

/// All words over `alphabet` within edit distance k of w.
inline std::set<Word> neighbourhood(const Word& w, const Word& alphabet,
                                    std::size_t k) {
  std::set<Word> out{w};
  std::set<Word> frontier{w};
  for (std::size_t step = 0; step < k; ++step) {
    std::set<Word> next;
    for (const auto& u : frontier) {
      for (std::size_t i = 0; i <= u.size(); ++i)
        for (SymbolId a : alphabet) {
          auto v = u;
          v.insert(v.begin() + static_cast<std::ptrdiff_t>(i), a);
          next.insert(v);
        }
      for (std::size_t i = 0; i < u.size(); ++i) {
        auto v = u;
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        next.insert(v);
        for (SymbolId a : alphabet) {
          v = u;
          v[i] = a;
          next.insert(v);
        }
      }
    }
    frontier.clear();
    for (const auto& v : next)
      if (out.insert(v).second) frontier.insert(v);
  }
  return out;
}

/// Terminal strings spelled by each edge's recorded expansions, computed
/// as a fixpoint so that unary cycles terminate. Only meaningful for
/// grammars without class terminals.
inline std::vector<std::set<Word>> spelled_all(const Reachability& r) {
  std::vector<std::set<Word>> w(r.edge_count());
  for (bool changed = true; changed;) {
    changed = false;
    for (EdgeId e = 0; e < r.edge_count(); ++e) {
      auto add = [&](const Word& x) { changed |= w[e].insert(x).second; };
      for (const auto& x : r.expansions(e)) {
        switch (x.kind) {
          case ExpansionKind::Leaf:
            add(Word{r.graph().edge(x.left).symbol});
            break;
          case ExpansionKind::Epsilon:
            add(Word{});
            break;
          case ExpansionKind::Unary:
          case ExpansionKind::DeleteTrailing: {
            const auto copy = w[x.left];
            for (const auto& a : copy) add(a);
            break;
          }
          case ExpansionKind::DeleteLeft: {
            const auto copy = w[x.right];
            for (const auto& a : copy) add(a);
            break;
          }
          case ExpansionKind::Binary: {
            const auto left = w[x.left];
            const auto right = w[x.right];
            for (const auto& a : left)
              for (const auto& b : right) {
                auto c = a;
                c.insert(c.end(), b.begin(), b.end());
                add(c);
              }
            break;
          }
        }
      }
    }
  }
  return w;
}

/// Random grammar over fixed terminals a, b, c (and sometimes d) with up to
/// four nonterminals and right-hand sides of length 0..4.
inline std::string random_grammar_text(Rng& rng) {
  const int nts = static_cast<int>(rng.between(1, 4));
  const int nterms = static_cast<int>(rng.between(2, 4));
  const std::string terms[] = {"'a'", "'b'", "'c'", "'d'"};
  auto nt = [](int i) { return std::string(1, static_cast<char>('S' + i)); };
  std::vector<std::string> lines;
  auto add = [&](std::string line) {
    if (std::find(lines.begin(), lines.end(), line) == lines.end())
      lines.push_back(std::move(line));
  };
  for (int a = 0; a < nts; ++a) {
    const int prods = static_cast<int>(rng.between(1, 3));
    for (int k = 0; k < prods; ++k) {
      std::string line = nt(a) + " ->";
      const int len = static_cast<int>(rng.between(0, 4));
      if (len == 0) line += " .";
      for (int i = 0; i < len; ++i) {
        if (rng.chance(1, 3))
          line += " " + nt(static_cast<int>(rng.below(nts)));
        else
          line += " " + terms[rng.below(nterms)];
      }
      add(line);
    }
    // keeps every nonterminal productive
    add(nt(a) + " -> " + terms[rng.below(nterms)]);
  }
  std::string text = "start S;\n";
  for (const auto& l : lines) text += l + "\n";
  return text;
}

inline std::vector<Token> tokens_of(const Grammar& g, const Word& w) {
  std::vector<Token> out;
  for (SymbolId s : w)
    out.push_back(Token{s, g.symbol(s).name,
                        static_cast<std::uint32_t>(out.size())});
  return out;
}

inline Word word_of(std::span<const Token> ts) {
  Word w;
  for (const auto& t : ts) w.push_back(t.terminal);
  return w;
}

}  // namespace ordfix::testing

#endif  // ORDFIX_TESTS_SUPPORT_HPP
