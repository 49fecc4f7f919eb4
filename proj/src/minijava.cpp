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

// minijava: method bodies of a small class-based object language. Types are
// class names; `null` converts to every class and `==` yields a boolean that
// only conditions accept.

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "ordfix/langs.hpp"

namespace ordfix {

namespace {

constexpr std::string_view kGrammar = R"(
# Lexed so that arithmetic fragments tokenize; no production uses them.
terminal '<' '+';
terminal NUM : literal;
terminal ID : identifier;
start Body;
Body -> Stmts
Stmts -> .
Stmts -> Stmt Stmts
Stmt -> ID ID ';'
Stmt -> ID '=' Expr ';'
Stmt -> Prim '.' ID '=' Expr ';'
Stmt -> Expr ';'
Stmt -> 'if' '(' Expr ')' '{' Stmts '}' 'else' '{' Stmts '}'
Stmt -> 'while' '(' Expr ')' '{' Stmts '}'
Stmt -> 'break' ';'
Stmt -> 'return' Expr ';'
Expr -> Prim
Expr -> Prim '==' Prim
Prim -> ID
Prim -> 'null'
Prim -> '(' Expr ')'
Prim -> 'new' ID '(' Args ')'
Prim -> Prim '.' ID
Prim -> Prim '.' ID '(' Args ')'
Args -> .
Args -> ArgList
ArgList -> Expr
ArgList -> Expr ',' ArgList
)";

constexpr std::string_view kNull = "null";
constexpr std::string_view kBool = "bool";

bool assignable(const TypeEnv& env, std::string_view from, std::string_view to) {
  if (from == kBool || to == kBool || to == kNull) return false;
  if (from == kNull) return env.is_class(to);
  return env.is_subtype(from, to);
}

// ---------------------------------------------------------------------------
// Attribute payloads

using Scope = std::vector<std::pair<std::string, std::string>>;

struct IdTab {
  Scope vars;  // declaration order
  std::size_t hash() const {
    std::size_t h = vars.size();
    for (const auto& [n, t] : vars)
      h = hash_mix(h, hash_mix(std::hash<std::string>{}(n),
                               std::hash<std::string>{}(t)));
    return h;
  }
  bool operator==(const IdTab&) const = default;
  const std::string* find(std::string_view name) const {
    for (const auto& [n, t] : vars)
      if (n == name) return &t;
    return nullptr;
  }
};

struct StmtCtx {
  AttrValue idtab;
  std::uint32_t depth = 0;
  std::size_t hash() const { return hash_mix(idtab.hash(), depth); }
  bool operator==(const StmtCtx&) const = default;
};

struct ArgsCtx {
  AttrValue idtab;
  std::vector<std::string> params;  // still to be matched
  std::size_t hash() const {
    std::size_t h = idtab.hash();
    for (const auto& p : params) h = hash_mix(h, std::hash<std::string>{}(p));
    return h;
  }
  bool operator==(const ArgsCtx&) const = default;
};

struct ExprVal {
  std::string type;
  bool call = false;  // method call or instance creation
  std::size_t hash() const {
    return hash_mix(std::hash<std::string>{}(type), call);
  }
  bool operator==(const ExprVal&) const = default;
};

struct TypeName {
  std::string name;
  std::size_t hash() const { return std::hash<std::string>{}(name); }
  bool operator==(const TypeName&) const = default;
};

struct DeclName {
  std::string name;
  std::size_t hash() const { return std::hash<std::string>{}(name); }
  bool operator==(const DeclName&) const = default;
};

struct Signature {
  std::string ret;
  std::vector<std::string> params;
  std::size_t hash() const {
    std::size_t h = std::hash<std::string>{}(ret);
    for (const auto& p : params) h = hash_mix(h, std::hash<std::string>{}(p));
    return h;
  }
  bool operator==(const Signature&) const = default;
};

enum class Role : std::uint8_t { VarUse, ClassName, NewName, Field, Method };

// Inherited value of an identifier terminal.
struct IdRole {
  Role role;
  AttrValue idtab;  // VarUse, NewName
  std::string cls;  // Field, Method: receiver class
  std::size_t hash() const {
    return hash_mix(hash_mix(static_cast<std::size_t>(role), idtab.hash()),
                    std::hash<std::string>{}(cls));
  }
  bool operator==(const IdRole&) const = default;
};

enum class Form : std::uint8_t {
  Body, StmtsEmpty, StmtsCons,
  Decl, Assign, FieldAssign, ExprStmt, If, While, Break, Return,
  ExprPrim, ExprEq,
  PrimVar, PrimNull, PrimParen, PrimNew, PrimField, PrimCall,
  ArgsEmpty, ArgsList, ArgLast, ArgCons,
};

// ---------------------------------------------------------------------------
// Rules

class MiniJavaRules final : public SequenceRules {
 public:
  MiniJavaRules(const Grammar& g, const std::vector<Form>& forms,
                const TypeEnv& env, std::span<const Token> tokens)
      : g_(g), forms_(forms), env_(env) {
    IdTab root;
    for (const auto& [n, t] : env.vars()) root.vars.emplace_back(n, t);
    root_ = AttrValue::make(StmtCtx{AttrValue::make(std::move(root)), 0});

    classes_.emplace_back(TypeEnv::kObject);
    for (const auto& c : env.classes()) classes_.push_back(c.name);
    std::unordered_set<std::string> seen;
    const auto id = g.identifier_terminal();
    for (const auto& t : tokens)
      if (id && t.terminal == *id && !env.is_class(t.lexeme) &&
          seen.insert(t.lexeme).second)
        program_names_.push_back(t.lexeme);
    program_names_.push_back(fresh_identifier(env, tokens));
  }

  std::vector<TerminalChoice> terminal(const TerminalInfo& t,
                                       const AttrValue& inh) const override {
    if (!g_.symbol(t.terminal).is_class_terminal())
      return {{AttrValue{}, g_.symbol(t.terminal).name}};
    const auto* r = inh.get_if<IdRole>();
    if (!r) return {};  // literal class: no production consumes it
    std::vector<TerminalChoice> out;
    auto offer = [&](const std::string& name, AttrValue v) {
      if (t.kind == EditKind::Original && !t.lexeme_must_differ) {
        if (name != t.original_lexeme) return;
      } else if (t.lexeme_must_differ && name == t.original_lexeme) {
        return;
      }
      out.push_back({std::move(v), name});
    };
    switch (r->role) {
      case Role::VarUse:
        for (const auto& [n, ty] : r->idtab.get<IdTab>().vars)
          offer(n, AttrValue::make(ExprVal{ty, false}));
        break;
      case Role::ClassName:
        for (const auto& c : classes_) offer(c, AttrValue::make(TypeName{c}));
        break;
      case Role::NewName: {
        const auto& tab = r->idtab.get<IdTab>();
        for (const auto& n : program_names_)
          if (!tab.find(n)) offer(n, AttrValue::make(DeclName{n}));
        break;
      }
      case Role::Field: {
        std::unordered_set<std::string> hidden;
        for (std::string_view c = r->cls; c != TypeEnv::kObject;) {
          const auto* cd = env_.find_class(c);
          for (const auto& [n, ty] : cd->fields)
            if (hidden.insert(n).second)
              offer(n, AttrValue::make(TypeName{ty}));
          c = cd->super;
        }
        break;
      }
      case Role::Method: {
        std::unordered_set<std::string> hidden;
        for (std::string_view c = r->cls; c != TypeEnv::kObject;) {
          const auto* cd = env_.find_class(c);
          for (const auto& m : cd->methods)
            if (hidden.insert(m.name).second)
              offer(m.name, AttrValue::make(Signature{m.return_type, m.params}));
          c = cd->super;
        }
        break;
      }
    }
    return out;
  }

  std::optional<AttrValue> inherited(
      const Production& p, std::size_t i, const AttrValue& parent,
      std::span<const AttrValue> left) const override {
    auto unit = std::optional<AttrValue>(AttrValue{});
    auto expr_ctx = [&](const AttrValue& stmt) {
      return std::optional<AttrValue>(stmt.get<StmtCtx>().idtab);
    };
    auto role = [](Role r, AttrValue tab = {}, std::string cls = {}) {
      return std::optional<AttrValue>(
          AttrValue::make(IdRole{r, std::move(tab), std::move(cls)}));
    };
    auto receiver = [&](const AttrValue& v) -> const std::string* {
      const auto& ty = v.get<ExprVal>().type;
      return env_.find_class(ty) ? &ty : nullptr;
    };
    switch (forms_[p.id]) {
      case Form::Body:
      case Form::StmtsEmpty:
        return parent;
      case Form::StmtsCons:
        if (i == 0) return parent;
        return AttrValue::make(StmtCtx{left[0], parent.get<StmtCtx>().depth});
      case Form::Decl:
        if (i == 0) return role(Role::ClassName);
        if (i == 1) return role(Role::NewName, parent.get<StmtCtx>().idtab);
        return unit;
      case Form::Assign:
        if (i == 0) return role(Role::VarUse, parent.get<StmtCtx>().idtab);
        if (i == 2) return expr_ctx(parent);
        return unit;
      case Form::FieldAssign:
        if (i == 0 || i == 4) return expr_ctx(parent);
        if (i == 2) {
          const auto* c = receiver(left[0]);
          if (!c) return std::nullopt;
          return role(Role::Field, {}, *c);
        }
        return unit;
      case Form::ExprStmt:
        return i == 0 ? expr_ctx(parent) : unit;
      case Form::If:
      case Form::While: {
        if (i == 2) return expr_ctx(parent);
        if (i == 3 && left[2].get<ExprVal>().type != kBool) return std::nullopt;
        if (i == 5 || i == 9) {
          const auto& s = parent.get<StmtCtx>();
          const std::uint32_t d = forms_[p.id] == Form::While ? 1 : 0;
          return AttrValue::make(StmtCtx{s.idtab, s.depth + d});
        }
        return unit;
      }
      case Form::Break:
        if (i == 0 && parent.get<StmtCtx>().depth == 0) return std::nullopt;
        return unit;
      case Form::Return:
        return i == 1 ? expr_ctx(parent) : unit;
      case Form::ExprPrim:
        return parent;
      case Form::ExprEq:
        return i == 1 ? unit : std::optional<AttrValue>(parent);
      case Form::PrimVar:
        return role(Role::VarUse, parent);
      case Form::PrimNull:
        return unit;
      case Form::PrimParen:
        return i == 1 ? std::optional<AttrValue>(parent) : unit;
      case Form::PrimNew:
        if (i == 1) return role(Role::ClassName);
        if (i == 3)
          return AttrValue::make(ArgsCtx{
              parent, *env_.ctor(left[1].get<TypeName>().name)});
        return unit;
      case Form::PrimField:
      case Form::PrimCall:
        if (i == 0) return parent;
        if (i == 2) {
          const auto* c = receiver(left[0]);
          if (!c) return std::nullopt;
          return role(forms_[p.id] == Form::PrimField ? Role::Field
                                                      : Role::Method,
                      {}, *c);
        }
        if (i == 4)
          return AttrValue::make(
              ArgsCtx{parent, left[2].get<Signature>().params});
        return unit;
      case Form::ArgsEmpty:
        return std::nullopt;  // no children
      case Form::ArgsList:
        if (parent.get<ArgsCtx>().params.empty()) return std::nullopt;
        return parent;
      case Form::ArgLast:
        if (parent.get<ArgsCtx>().params.size() != 1) return std::nullopt;
        return parent.get<ArgsCtx>().idtab;
      case Form::ArgCons: {
        const auto& a = parent.get<ArgsCtx>();
        if (a.params.size() < 2) return std::nullopt;
        if (i == 0) return a.idtab;
        if (i == 1) {
          if (!assignable(env_, left[0].get<ExprVal>().type, a.params[0]))
            return std::nullopt;
          return unit;
        }
        return AttrValue::make(ArgsCtx{
            a.idtab, {a.params.begin() + 1, a.params.end()}});
      }
    }
    return std::nullopt;
  }

  std::optional<AttrValue> synthesized(
      const Production& p, const AttrValue& parent,
      std::span<const AttrValue> c) const override {
    auto same_scope = [&] {
      return std::optional<AttrValue>(parent.get<StmtCtx>().idtab);
    };
    auto expr = [](std::string type, bool call) {
      return std::optional<AttrValue>(
          AttrValue::make(ExprVal{std::move(type), call}));
    };
    switch (forms_[p.id]) {
      case Form::Body:
      case Form::StmtsEmpty:
      case Form::StmtsCons:
        return AttrValue{};
      case Form::Decl: {
        auto tab = parent.get<StmtCtx>().idtab.get<IdTab>();
        tab.vars.emplace_back(c[1].get<DeclName>().name,
                              c[0].get<TypeName>().name);
        return AttrValue::make(std::move(tab));
      }
      case Form::Assign:
        if (!assignable(env_, c[2].get<ExprVal>().type,
                        c[0].get<ExprVal>().type))
          return std::nullopt;
        return same_scope();
      case Form::FieldAssign:
        if (!assignable(env_, c[4].get<ExprVal>().type,
                        c[2].get<TypeName>().name))
          return std::nullopt;
        return same_scope();
      case Form::ExprStmt:
        if (!c[0].get<ExprVal>().call) return std::nullopt;
        return same_scope();
      case Form::If:
      case Form::While:
      case Form::Break:
        return same_scope();
      case Form::Return:
        if (!assignable(env_, c[1].get<ExprVal>().type, env_.return_type()))
          return std::nullopt;
        return same_scope();
      case Form::ExprPrim:
        return c[0];
      case Form::ExprEq:
        if (c[0].get<ExprVal>().type == kBool ||
            c[2].get<ExprVal>().type == kBool)
          return std::nullopt;
        return expr(std::string(kBool), false);
      case Form::PrimVar:
        return c[0];
      case Form::PrimNull:
        return expr(std::string(kNull), false);
      case Form::PrimParen:
        return expr(c[1].get<ExprVal>().type, false);
      case Form::PrimNew:
        return expr(c[1].get<TypeName>().name, true);
      case Form::PrimField:
        return expr(c[2].get<TypeName>().name, false);
      case Form::PrimCall:
        return expr(c[2].get<Signature>().ret, true);
      case Form::ArgsEmpty:
        if (!parent.get<ArgsCtx>().params.empty()) return std::nullopt;
        return AttrValue{};
      case Form::ArgsList:
        return AttrValue{};
      case Form::ArgLast:
        if (!assignable(env_, c[0].get<ExprVal>().type,
                        parent.get<ArgsCtx>().params[0]))
          return std::nullopt;
        return AttrValue{};
      case Form::ArgCons:
        return AttrValue{};
    }
    return std::nullopt;
  }

  AttrValue root() const override { return root_; }

 private:
  const Grammar& g_;
  const std::vector<Form>& forms_;
  TypeEnv env_;
  AttrValue root_;
  std::vector<std::string> classes_;
  std::vector<std::string> program_names_;
};

// ---------------------------------------------------------------------------
// Reference checker: recursive descent over the token stream, evaluating
// types directly on the single parse.

class Checker {
 public:
  Checker(const Grammar& g, std::span<const Token> toks, const TypeEnv& env)
      : g_(g), t_(toks), env_(env), id_(*g.identifier_terminal()) {
    scope_.assign(env.vars().begin(), env.vars().end());
  }

  CheckResult run() {
    try {
      stmts();
      if (pos_ != t_.size()) fail("expected a statement");
      return {true, "", t_.size()};
    } catch (const Failure& f) {
      return {false, f.what, horizon_};
    }
  }

 private:
  struct Failure {
    std::string what;
  };
  struct Expr {
    std::string type;
    bool call = false;
  };

  [[noreturn]] void fail(const std::string& what) const {
    seen(pos_);
    std::string where = pos_ < t_.size()
                            ? "token " + std::to_string(pos_) + " '" +
                                  t_[pos_].lexeme + "'"
                            : std::string("end of input");
    throw Failure{"at " + where + ": " + what};
  }
  void seen(std::size_t k) const {
    horizon_ = std::max(horizon_, std::min(k, t_.size()));
  }
  bool is(std::string_view lexeme, std::size_t ahead = 0) const {
    const auto k = pos_ + ahead;
    seen(k);
    return k < t_.size() && !g_.symbol(t_[k].terminal).is_class_terminal() &&
           t_[k].lexeme == lexeme;
  }
  bool is_id(std::size_t ahead = 0) const {
    const auto k = pos_ + ahead;
    seen(k);
    return k < t_.size() && t_[k].terminal == id_;
  }
  void expect(std::string_view lexeme) {
    if (!is(lexeme)) fail("expected '" + std::string(lexeme) + "'");
    ++pos_;
  }
  std::string ident() {
    if (!is_id()) fail("expected an identifier");
    return t_[pos_++].lexeme;
  }
  const std::string* lookup(std::string_view name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
  void need_assignable(const std::string& from, const std::string& to) {
    if (!assignable(env_, from, to))
      fail("cannot convert " + from + " to " + to);
  }

  void stmts() {
    while (pos_ < t_.size() && !is("}")) stmt();
  }

  void block(std::uint32_t extra_depth) {
    expect("{");
    const auto saved = scope_.size();
    depth_ += extra_depth;
    stmts();
    depth_ -= extra_depth;
    scope_.resize(saved);
    expect("}");
  }

  void condition() {
    expect("(");
    auto e = expr();
    if (e.type != kBool) fail("condition must be a comparison");
    expect(")");
  }

  void stmt() {
    if (is("if")) {
      ++pos_;
      condition();
      block(0);
      expect("else");
      block(0);
      return;
    }
    if (is("while")) {
      ++pos_;
      condition();
      block(1);
      return;
    }
    if (is("break")) {
      if (depth_ == 0) fail("break outside of a loop");
      ++pos_;
      expect(";");
      return;
    }
    if (is("return")) {
      ++pos_;
      auto e = expr();
      need_assignable(e.type, env_.return_type());
      expect(";");
      return;
    }
    if (is_id() && is_id(1)) {
      const auto type = ident();
      if (!env_.is_class(type)) fail("unknown class " + type);
      const auto name = ident();
      if (lookup(name)) fail(name + " is already defined");
      if (env_.is_class(name)) fail(name + " names a class");
      expect(";");
      scope_.emplace_back(name, type);
      return;
    }
    if (is_id() && is("=", 1)) {
      const auto name = ident();
      const auto* ty = lookup(name);
      if (!ty) fail("undefined variable " + name);
      const std::string lhs = *ty;
      ++pos_;
      auto e = expr();
      need_assignable(e.type, lhs);
      expect(";");
      return;
    }
    auto p = prim();
    if (is(".") && is_id(1) && is("=", 2)) {
      ++pos_;
      const auto* ft = field(p.type, ident());
      ++pos_;
      const std::string lhs = *ft;
      auto e = expr();
      need_assignable(e.type, lhs);
      expect(";");
      return;
    }
    auto e = rest_of_expr(std::move(p));
    if (!e.call) fail("expression statement must be a call or 'new'");
    expect(";");
  }

  Expr expr() { return rest_of_expr(prim()); }

  Expr rest_of_expr(Expr left) {
    if (!is("==")) return left;
    ++pos_;
    auto right = prim();
    if (left.type == kBool || right.type == kBool)
      fail("cannot compare booleans");
    return {std::string(kBool), false};
  }

  const std::string* field(const std::string& cls, const std::string& name) {
    if (!env_.find_class(cls)) fail("type " + cls + " has no fields");
    const auto* ft = env_.field_type(cls, name);
    if (!ft) fail(cls + " has no field " + name);
    return ft;
  }

  void args(const std::vector<std::string>& params) {
    expect("(");
    std::size_t k = 0;
    if (!is(")")) {
      for (;;) {
        auto e = expr();
        if (k >= params.size()) fail("too many arguments");
        need_assignable(e.type, params[k++]);
        if (!is(",")) break;
        ++pos_;
      }
    }
    if (k != params.size()) fail("too few arguments");
    expect(")");
  }

  Expr prim() {
    Expr cur;
    if (is("null")) {
      ++pos_;
      cur = {std::string(kNull), false};
    } else if (is("(")) {
      ++pos_;
      cur = {expr().type, false};
      expect(")");
    } else if (is("new")) {
      ++pos_;
      const auto cls = ident();
      const auto params = env_.ctor(cls);
      if (!params) fail("unknown class " + cls);
      args(*params);
      cur = {cls, true};
    } else if (is_id()) {
      const auto name = ident();
      const auto* ty = lookup(name);
      if (!ty) fail("undefined variable " + name);
      cur = {*ty, false};
    } else {
      fail("expected an expression");
    }
    while (is(".") && !(is_id(1) && is("=", 2))) {
      ++pos_;
      const auto name = ident();
      if (is("(")) {
        if (!env_.find_class(cur.type)) fail("type " + cur.type + " has no methods");
        const auto* m = env_.method(cur.type, name);
        if (!m) fail(cur.type + " has no method " + name);
        args(m->params);
        cur = {m->return_type, true};
      } else {
        cur = {*field(cur.type, name), false};
      }
    }
    return cur;
  }

  const Grammar& g_;
  std::span<const Token> t_;
  const TypeEnv& env_;
  SymbolId id_;
  std::size_t pos_ = 0;
  std::uint32_t depth_ = 0;
  Scope scope_;
  mutable std::size_t horizon_ = 0;
};

class MiniJava final : public Frontend {
 public:
  MiniJava() : Frontend(kGrammar) {
    static const std::pair<std::string_view, Form> table[] = {
        {"Body -> Stmts", Form::Body},
        {"Stmts ->", Form::StmtsEmpty},
        {"Stmts -> Stmt Stmts", Form::StmtsCons},
        {"Stmt -> ID ID ;", Form::Decl},
        {"Stmt -> ID = Expr ;", Form::Assign},
        {"Stmt -> Prim . ID = Expr ;", Form::FieldAssign},
        {"Stmt -> Expr ;", Form::ExprStmt},
        {"Stmt -> if ( Expr ) { Stmts } else { Stmts }", Form::If},
        {"Stmt -> while ( Expr ) { Stmts }", Form::While},
        {"Stmt -> break ;", Form::Break},
        {"Stmt -> return Expr ;", Form::Return},
        {"Expr -> Prim", Form::ExprPrim},
        {"Expr -> Prim == Prim", Form::ExprEq},
        {"Prim -> ID", Form::PrimVar},
        {"Prim -> null", Form::PrimNull},
        {"Prim -> ( Expr )", Form::PrimParen},
        {"Prim -> new ID ( Args )", Form::PrimNew},
        {"Prim -> Prim . ID", Form::PrimField},
        {"Prim -> Prim . ID ( Args )", Form::PrimCall},
        {"Args ->", Form::ArgsEmpty},
        {"Args -> ArgList", Form::ArgsList},
        {"ArgList -> Expr", Form::ArgLast},
        {"ArgList -> Expr , ArgList", Form::ArgCons},
    };
    std::unordered_map<std::string, Form> by_text;
    for (const auto& [text, f] : table) by_text.emplace(text, f);
    const auto& g = grammar();
    for (const auto& p : g.productions()) {
      std::string s = g.symbol(p.lhs).name + " ->";
      for (auto x : p.rhs) s += " " + g.symbol(x).name;
      auto it = by_text.find(s);
      if (it == by_text.end())
        throw std::logic_error("minijava: no rule for production " + s);
      forms_.push_back(it->second);
    }
  }

  std::string_view name() const override { return "minijava"; }

  void validate_env(const TypeEnv& env) const override { env.validate(true); }

  std::shared_ptr<const AttributeRules> rules(
      const TypeEnv& env, std::span<const Token> tokens) const override {
    return std::make_shared<NormalizedRules>(
        normalized(),
        std::make_shared<MiniJavaRules>(grammar(), forms_, env, tokens));
  }

  CheckResult check_compiles(std::span<const Token> tokens,
                             const TypeEnv& env) const override {
    return Checker(grammar(), tokens, env).run();
  }

 private:
  std::vector<Form> forms_;
};

}  // namespace

const Frontend& minijava() {
  static const MiniJava f;
  return f;
}

}  // namespace ordfix
