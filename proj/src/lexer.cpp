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

#include <cctype>
#include <unordered_set>

#include "ordfix/langs.hpp"

namespace ordfix {

LexError::LexError(const std::string& what, std::size_t line,
                   std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> lex(std::string_view text, const Grammar& g) {
  std::vector<std::string_view> puncts;
  for (const auto& s : g.symbols())
    if (s.is_terminal() && !s.is_class_terminal() && !s.name.empty() &&
        !ident_start(s.name[0]))
      puncts.push_back(s.name);

  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto step = [&](std::size_t k) {
    for (std::size_t m = 0; m < k; ++m, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto emit = [&](SymbolId t, std::string_view lexeme) {
    out.push_back(Token{t, std::string(lexeme),
                        static_cast<std::uint32_t>(out.size())});
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      step(1);
      continue;
    }
    if (text.compare(i, 2, "//") == 0) {
      while (i < text.size() && text[i] != '\n') step(1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      const auto word = text.substr(i, j - i);
      if (auto kw = g.find_fixed(word)) {
        emit(*kw, word);
      } else if (auto id = g.identifier_terminal()) {
        emit(*id, word);
      } else {
        throw LexError("identifier '" + std::string(word) +
                           "' not allowed in this language",
                       line, col);
      }
      step(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      auto lit = g.literal_terminal();
      if (!lit) throw LexError("unexpected number", line, col);
      emit(*lit, text.substr(i, j - i));
      step(j - i);
      continue;
    }
    std::string_view best;
    for (auto p : puncts)
      if (p.size() > best.size() && text.compare(i, p.size(), p) == 0) best = p;
    if (best.empty())
      throw LexError(std::string("unexpected character '") + c + "'", line,
                     col);
    emit(*g.find_fixed(best), best);
    step(best.size());
  }
  return out;
}

std::string render(std::span<const Token> tokens) {
  std::string s;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += ' ';
    s += tokens[i].lexeme;
  }
  return s;
}

std::string fresh_identifier(const TypeEnv& env, std::span<const Token> tokens,
                             std::size_t k) {
  std::unordered_set<std::string> taken;
  for (auto& n : env.names()) taken.insert(n);
  for (const auto& t : tokens) taken.insert(t.lexeme);
  for (std::size_t i = 0;; ++i) {
    auto name = "tmp" + std::to_string(i);
    if (taken.count(name)) continue;
    if (k-- == 0) return name;
  }
}

Frontend::Frontend(std::string_view grammar_text)
    : grammar_(parse_grammar(grammar_text)), normalized_(normalize(grammar_)) {}

Token Frontend::make_token(std::string_view lexeme) const {
  auto toks = lex(lexeme);
  if (toks.size() != 1)
    throw LexError("'" + std::string(lexeme) + "' is not a single token", 1, 1);
  return toks[0];
}

const Frontend& frontend_by_name(std::string_view name) {
  if (name == tiny_assign().name()) return tiny_assign();
  if (name == minijava().name()) return minijava();
  throw std::invalid_argument("unknown language '" + std::string(name) + "'");
}

std::vector<std::string> frontend_names() {
  return {std::string(tiny_assign().name()), std::string(minijava().name())};
}

}  // namespace ordfix
