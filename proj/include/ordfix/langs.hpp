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

#ifndef ORDFIX_LANGS_HPP
#define ORDFIX_LANGS_HPP

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ordfix/attribute_rules.hpp"
#include "ordfix/grammar.hpp"
#include "ordfix/modgraph.hpp"

namespace ordfix {

// ---------------------------------------------------------------------------
// Environments

class EnvError : public std::runtime_error {
 public:
  EnvError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct MethodDecl {
  std::string name;
  std::string return_type;
  std::vector<std::string> params;
};

struct ClassDecl {
  std::string name;
  std::string super = "Object";
  std::vector<std::pair<std::string, std::string>> fields;  // name, type
  std::vector<MethodDecl> methods;
  std::vector<std::string> ctor;  // constructor parameter types
};

/// External declarations a program is checked against. `Object` is
/// implicit: it has no fields, no methods and a nullary constructor.
class TypeEnv {
 public:
  static constexpr std::string_view kObject = "Object";

  void add_class(ClassDecl c);
  void add_var(std::string name, std::string type);
  void set_return_type(std::string t) { return_type_ = std::move(t); }

  std::span<const ClassDecl> classes() const { return classes_; }
  std::span<const std::pair<std::string, std::string>> vars() const {
    return vars_;
  }
  const std::string& return_type() const { return return_type_; }

  bool is_class(std::string_view name) const;
  const ClassDecl* find_class(std::string_view name) const;
  /// Reflexive-transitive superclass relation.
  bool is_subtype(std::string_view sub, std::string_view super) const;
  /// Nearest declaration up the superclass chain.
  const std::string* field_type(std::string_view cls,
                                std::string_view field) const;
  const MethodDecl* method(std::string_view cls, std::string_view name) const;
  /// Constructor parameters; Object's is empty.
  std::optional<std::vector<std::string>> ctor(std::string_view cls) const;

  /// Every name the environment declares (classes incl. Object, fields,
  /// methods, variables), deduplicated, in first-declaration order.
  std::vector<std::string> names() const;

  /// Canonical text form accepted by parse_env.
  std::string to_text() const;

  /// Throws EnvError on unknown superclasses or inheritance cycles. With
  /// `types_are_classes`, every field/method/variable type must name a class.
  void validate(bool types_are_classes) const;

 private:
  std::vector<ClassDecl> classes_;
  std::unordered_map<std::string, std::size_t> class_index_;
  std::vector<std::pair<std::string, std::string>> vars_;
  std::string return_type_ = "Object";
};

/// Parses `class C : S { field T f; method R m(P, Q); new(P); }`,
/// `var x : T;` and `returns T;` declarations. `//` starts a comment.
TypeEnv parse_env(std::string_view text);

// ---------------------------------------------------------------------------
// Lexing

class LexError : public std::runtime_error {
 public:
  LexError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Longest-match tokenizer over the grammar's fixed lexemes. Identifiers
/// are [A-Za-z_][A-Za-z0-9_]* (keyword lexemes map to their terminal),
/// digit runs map to the literal class terminal; `//` comments and
/// whitespace are skipped.
std::vector<Token> lex(std::string_view text, const Grammar& g);

/// Tokens joined by single spaces.
std::string render(std::span<const Token> tokens);

/// The k-th canonical fresh identifier ("tmp0", "tmp1", ...) that is not an
/// environment name and not a lexeme of `tokens`.
std::string fresh_identifier(const TypeEnv& env, std::span<const Token> tokens,
                             std::size_t k = 0);

// ---------------------------------------------------------------------------
// Frontends

struct CheckResult {
  bool ok = false;
  std::string diagnostic;
  /// Largest token index the checker examined (tokens.size() if it looked
  /// at the end of input). The checkers decide left to right, so a program
  /// agreeing with this one on tokens [0, horizon] is rejected as well.
  std::size_t horizon = 0;
};

class Frontend {
 public:
  virtual ~Frontend() = default;

  virtual std::string_view name() const = 0;
  const Grammar& grammar() const { return grammar_; }
  const Grammar& normalized() const { return normalized_; }

  std::vector<Token> lex(std::string_view text) const {
    return ordfix::lex(text, grammar_);
  }
  /// Classifies a single lexeme (keyword, punctuation, identifier, literal).
  Token make_token(std::string_view lexeme) const;

  /// Throws EnvError if `env` is not usable with this language.
  virtual void validate_env(const TypeEnv& env) const = 0;

  /// Attribute rules for the normalized grammar. They may consult the
  /// program's own lexemes (for naming new declarations).
  virtual std::shared_ptr<const AttributeRules> rules(
      const TypeEnv& env, std::span<const Token> tokens) const = 0;

  /// Independent reference checker: recursive-descent parse plus type check.
  virtual CheckResult check_compiles(std::span<const Token> tokens,
                                     const TypeEnv& env) const = 0;

 protected:
  explicit Frontend(std::string_view grammar_text);

 private:
  Grammar grammar_;
  Grammar normalized_;
};

const Frontend& tiny_assign();
const Frontend& minijava();
/// Throws std::invalid_argument for unknown names.
const Frontend& frontend_by_name(std::string_view name);
std::vector<std::string> frontend_names();

}  // namespace ordfix

#endif  // ORDFIX_LANGS_HPP
