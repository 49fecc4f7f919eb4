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
#include <set>
#include <unordered_set>

#include "ordfix/langs.hpp"

namespace ordfix {

EnvError::EnvError(const std::string& what, std::size_t line)
    : std::runtime_error(line == 0 ? what
                                   : "line " + std::to_string(line) + ": " +
                                         what),
      line_(line) {}

void TypeEnv::add_class(ClassDecl c) {
  if (c.name == kObject || class_index_.count(c.name))
    throw EnvError("duplicate class '" + c.name + "'", 0);
  class_index_[c.name] = classes_.size();
  classes_.push_back(std::move(c));
}

void TypeEnv::add_var(std::string name, std::string type) {
  for (const auto& [n, t] : vars_)
    if (n == name) throw EnvError("duplicate variable '" + name + "'", 0);
  vars_.emplace_back(std::move(name), std::move(type));
}

bool TypeEnv::is_class(std::string_view name) const {
  return name == kObject || class_index_.count(std::string(name));
}

const ClassDecl* TypeEnv::find_class(std::string_view name) const {
  auto it = class_index_.find(std::string(name));
  return it == class_index_.end() ? nullptr : &classes_[it->second];
}

bool TypeEnv::is_subtype(std::string_view sub, std::string_view super) const {
  if (super == kObject) return is_class(sub);
  for (std::size_t guard = 0; guard <= classes_.size(); ++guard) {
    if (sub == super) return true;
    const auto* c = find_class(sub);
    if (!c) return false;
    sub = c->super;
  }
  return false;
}

const std::string* TypeEnv::field_type(std::string_view cls,
                                       std::string_view field) const {
  for (std::size_t guard = 0; guard <= classes_.size(); ++guard) {
    const auto* c = find_class(cls);
    if (!c) return nullptr;
    for (const auto& [n, t] : c->fields)
      if (n == field) return &t;
    cls = c->super;
  }
  return nullptr;
}

const MethodDecl* TypeEnv::method(std::string_view cls,
                                  std::string_view name) const {
  for (std::size_t guard = 0; guard <= classes_.size(); ++guard) {
    const auto* c = find_class(cls);
    if (!c) return nullptr;
    for (const auto& m : c->methods)
      if (m.name == name) return &m;
    cls = c->super;
  }
  return nullptr;
}

std::optional<std::vector<std::string>> TypeEnv::ctor(
    std::string_view cls) const {
  if (cls == kObject) return std::vector<std::string>{};
  if (const auto* c = find_class(cls)) return c->ctor;
  return std::nullopt;
}

std::vector<std::string> TypeEnv::names() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto push = [&](const std::string& s) {
    if (seen.insert(s).second) out.push_back(s);
  };
  push(std::string(kObject));
  for (const auto& c : classes_) push(c.name);
  for (const auto& c : classes_) {
    for (const auto& f : c.fields) push(f.first);
    for (const auto& m : c.methods) push(m.name);
  }
  for (const auto& v : vars_) push(v.first);
  return out;
}

std::string TypeEnv::to_text() const {
  std::string out;
  auto list = [](const std::vector<std::string>& ps) {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i) s += ", ";
      s += ps[i];
    }
    return s;
  };
  for (const auto& c : classes_) {
    out += "class " + c.name + " : " + c.super + " {";
    for (const auto& [n, t] : c.fields) out += " field " + t + " " + n + ";";
    for (const auto& m : c.methods)
      out += " method " + m.return_type + " " + m.name + "(" +
             list(m.params) + ");";
    if (!c.ctor.empty()) out += " new(" + list(c.ctor) + ");";
    out += " }\n";
  }
  for (const auto& [n, t] : vars_) out += "var " + n + " : " + t + ";\n";
  if (return_type_ != kObject) out += "returns " + return_type_ + ";\n";
  return out;
}

void TypeEnv::validate(bool types_are_classes) const {
  for (const auto& c : classes_) {
    if (!is_class(c.super))
      throw EnvError(
          "class '" + c.name + "' extends unknown class '" + c.super + "'", 0);
    std::string_view cur = c.name;
    std::set<std::string_view> seen;
    while (cur != kObject) {
      if (!seen.insert(cur).second)
        throw EnvError("inheritance cycle through '" + c.name + "'", 0);
      cur = find_class(cur)->super;
    }
  }
  if (!types_are_classes) return;
  auto need = [&](const std::string& t, const std::string& where) {
    if (!is_class(t))
      throw EnvError("unknown type '" + t + "' in " + where, 0);
  };
  for (const auto& c : classes_) {
    for (const auto& [n, t] : c.fields) need(t, c.name + "." + n);
    for (const auto& m : c.methods) {
      need(m.return_type, c.name + "." + m.name);
      for (const auto& p : m.params) need(p, c.name + "." + m.name);
    }
    for (const auto& p : c.ctor) need(p, "constructor of " + c.name);
  }
  for (const auto& [n, t] : vars_) need(t, "variable " + n);
  need(return_type_, "return type");
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct EnvToken {
  std::string text;  // empty at end of input
  std::size_t line;
  bool name;
};

class EnvScanner {
 public:
  explicit EnvScanner(std::string_view s) : s_(s) {}

  EnvToken next() {
    for (;;) {
      while (pos_ < s_.size() &&
             std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        if (s_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (s_.compare(pos_, 2, "//") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    if (pos_ >= s_.size()) return {"", line_, false};
    const char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
              s_[pos_] == '_'))
        ++pos_;
      return {std::string(s_.substr(b, pos_ - b)), line_, true};
    }
    if (std::string_view("{}();:,").find(c) != std::string_view::npos) {
      ++pos_;
      return {std::string(1, c), line_, false};
    }
    throw EnvError(std::string("unexpected character '") + c + "'", line_);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class EnvParser {
 public:
  explicit EnvParser(std::string_view s) : scan_(s) { advance(); }

  TypeEnv parse() {
    TypeEnv env;
    while (!cur_.text.empty()) {
      const auto line = cur_.line;
      try {
        if (cur_.text == "class") {
          env.add_class(parse_class());
        } else if (cur_.text == "var") {
          advance();
          auto n = name("variable name");
          expect(":");
          auto t = name("type");
          expect(";");
          env.add_var(std::move(n), std::move(t));
        } else if (cur_.text == "returns") {
          advance();
          env.set_return_type(name("type"));
          expect(";");
        } else {
          fail("expected 'class', 'var' or 'returns'");
        }
      } catch (const EnvError& e) {
        if (e.line() != 0) throw;
        throw EnvError(e.what(), line);
      }
    }
    env.validate(false);
    return env;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw EnvError(what + (cur_.text.empty() ? " at end of input"
                                             : ", got '" + cur_.text + "'"),
                   cur_.line);
  }
  void advance() { cur_ = scan_.next(); }
  void expect(std::string_view t) {
    if (cur_.text != t) fail("expected '" + std::string(t) + "'");
    advance();
  }
  std::string name(const char* what) {
    if (!cur_.name) fail(std::string("expected ") + what);
    auto s = cur_.text;
    advance();
    return s;
  }
  std::vector<std::string> params() {
    std::vector<std::string> ps;
    expect("(");
    if (cur_.text != ")") {
      ps.push_back(name("parameter type"));
      while (cur_.text == ",") {
        advance();
        ps.push_back(name("parameter type"));
      }
    }
    expect(")");
    return ps;
  }

  ClassDecl parse_class() {
    advance();
    ClassDecl c;
    c.name = name("class name");
    if (cur_.text == ":") {
      advance();
      c.super = name("superclass name");
    }
    expect("{");
    std::set<std::string> members;
    bool has_ctor = false;
    while (cur_.text != "}") {
      if (cur_.text == "field") {
        advance();
        auto t = name("field type");
        auto n = name("field name");
        expect(";");
        if (!members.insert(n).second) fail("duplicate member '" + n + "'");
        c.fields.emplace_back(std::move(n), std::move(t));
      } else if (cur_.text == "method") {
        advance();
        MethodDecl m;
        m.return_type = name("return type");
        m.name = name("method name");
        m.params = params();
        expect(";");
        if (!members.insert(m.name).second)
          fail("duplicate member '" + m.name + "'");
        c.methods.push_back(std::move(m));
      } else if (cur_.text == "new") {
        advance();
        if (has_ctor) fail("duplicate constructor");
        has_ctor = true;
        c.ctor = params();
        expect(";");
      } else {
        fail("expected 'field', 'method', 'new' or '}'");
      }
    }
    advance();
    return c;
  }

  EnvScanner scan_;
  EnvToken cur_;
};

}  // namespace

TypeEnv parse_env(std::string_view text) { return EnvParser(text).parse(); }

}  // namespace ordfix
