// Copyright 2026 The qiit-elab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rendering of translation outputs.
//
// sexpr atoms:
//   (Top) (TT) (Refl) (Bool) (Fin n) (BoolLit b) (FinLit k n) (Ext "name")
//   (Var n) (Set level) (Sigma "x" A B) (Pi "x" A B) (Lam "x" A b)
//   (App f a) (Proj1 t) (Proj2 t) (Eq l r) (Transport P e t)
// levels: n | i | (+ i n) | (max i n) | (max (+ i n) m)

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "qiit/error.hpp"
#include "qiit/otl.hpp"
#include "qiit/otl_check.hpp"
#include "qiit/otl_print.hpp"
#include "qiit/translate.hpp"

namespace qiit {

enum class Backend { kAgdaText, kSexpr, kJson };

inline std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::kAgdaText: return "agda-text";
    case Backend::kSexpr: return "sexpr";
    case Backend::kJson: return "json";
  }
  return "?";
}

inline std::optional<Backend> parse_backend(std::string_view s) {
  if (s == "agda-text") return Backend::kAgdaText;
  if (s == "sexpr") return Backend::kSexpr;
  if (s == "json") return Backend::kJson;
  return std::nullopt;
}

struct EmitOptions {
  Backend backend = Backend::kAgdaText;
  std::optional<std::uint32_t> level_arg;
  bool flatten_sigma = false;
};

namespace otl {

// ---------------------------------------------------------------------------
// sexpr

namespace detail {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string level_sexpr(const Level& l) {
  if (!l.has_var) return fmt::format("{}", l.floor);
  std::string base = l.offset == 0 ? "i" : fmt::format("(+ i {})", l.offset);
  if (l.floor == 0) return base;
  return fmt::format("(max {} {})", base, l.floor);
}

inline void sexpr(const Tm& t, std::string& out) {
  auto kids = [&](std::string_view head, std::initializer_list<std::size_t> idx) {
    out += "(";
    out += head;
    for (std::size_t k : idx) {
      out += ' ';
      sexpr(t->kids[k], out);
    }
    out += ")";
  };
  switch (t->kind) {
    case Kind::kTop: out += "(Top)"; return;
    case Kind::kTT: out += "(TT)"; return;
    case Kind::kRefl: out += "(Refl)"; return;
    case Kind::kBool: out += "(Bool)"; return;
    case Kind::kFin: out += fmt::format("(Fin {})", t->a); return;
    case Kind::kBoolLit: out += t->a ? "(BoolLit true)" : "(BoolLit false)"; return;
    case Kind::kFinLit: out += fmt::format("(FinLit {} {})", t->a, t->b); return;
    case Kind::kExt: out += "(Ext " + quote(t->label) + ")"; return;
    case Kind::kBVar: out += fmt::format("(Var {})", t->a); return;
    case Kind::kFVar:
      throw Error(ErrorKind::kValidationFailed, fmt::format("free variable {} in output", t->label));
    case Kind::kSet: out += "(Set " + level_sexpr(t->level) + ")"; return;
    case Kind::kSigma:
    case Kind::kPi:
    case Kind::kLam: {
      const char* head = t->kind == Kind::kSigma ? "Sigma" : t->kind == Kind::kPi ? "Pi" : "Lam";
      out += fmt::format("({} {} ", head, quote(t->label));
      sexpr(t->kids[0], out);
      out += ' ';
      sexpr(t->kids[1], out);
      out += ")";
      return;
    }
    case Kind::kApp: kids("App", {0, 1}); return;
    case Kind::kProj1: kids("Proj1", {0}); return;
    case Kind::kProj2: kids("Proj2", {0}); return;
    case Kind::kEq: kids("Eq", {0, 1}); return;
    case Kind::kTransport: kids("Transport", {0, 1, 2}); return;
  }
}

}  // namespace detail

inline std::string to_sexpr(const Tm& t) {
  std::string out;
  detail::sexpr(t, out);
  return out;
}

namespace detail {

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : s_(text) {}

  Tm parse() {
    Tm t = term();
    skip();
    if (pos_ != s_.size()) error("trailing input");
    return t;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    SourceSpan span{1, 1};
    for (std::size_t k = 0; k < pos_ && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++span.line;
        span.column = 1;
      } else {
        ++span.column;
      }
    }
    throw Error(ErrorKind::kSyntax, fmt::format("{}:{}: {}", span.line, span.column, msg), span);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) error(fmt::format("expected '{}', found end of input", c));
    if (s_[pos_] != c) error(fmt::format("expected '{}', found '{}'", c, s_[pos_]));
    ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  std::string atom() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != '"') {
      ++pos_;
    }
    if (start == pos_) {
      if (pos_ >= s_.size()) error("expected an atom, found end of input");
      error(fmt::format("expected an atom, found '{}'", s_[pos_]));
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  std::uint32_t number() {
    std::string a = atom();
    std::uint32_t v = 0;
    for (char c : a) {
      if (!std::isdigit(static_cast<unsigned char>(c))) error(fmt::format("expected a number, found {}", a));
      v = v * 10 + static_cast<std::uint32_t>(c - '0');
    }
    return v;
  }

  std::string string() {
    expect('"');
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) error("unterminated string");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) error("unterminated string");
        c = s_[pos_++];
      }
      out += c;
    }
    return out;
  }

  Level level() {
    if (!peek('(')) {
      std::string a = atom();
      if (a == "i") return Level::var();
      pos_ -= a.size();
      return Level::lit(number());
    }
    expect('(');
    std::string head = atom();
    Level out;
    if (head == "+") {
      if (atom() != "i") error("expected i");
      out = Level{true, number(), 0};
    } else if (head == "max") {
      Level base = level();
      if (!base.has_var) error("expected a level mentioning i");
      out = Level{true, base.offset, number()};
    } else {
      error(fmt::format("unknown level form {}", head));
    }
    expect(')');
    return out;
  }

  Tm term() {
    expect('(');
    std::string head = atom();
    Tm t;
    if (head == "Top") {
      t = top();
    } else if (head == "TT") {
      t = tt();
    } else if (head == "Refl") {
      t = refl();
    } else if (head == "Bool") {
      t = bool_ty();
    } else if (head == "Fin") {
      t = fin_ty(number());
    } else if (head == "BoolLit") {
      std::string v = atom();
      if (v != "true" && v != "false") error("expected true or false");
      t = bool_lit(v == "true");
    } else if (head == "FinLit") {
      std::uint32_t k = number();
      t = fin_lit(k, number());
    } else if (head == "Ext") {
      t = ext(string());
    } else if (head == "Var") {
      t = bvar(number());
    } else if (head == "Set") {
      t = make({Kind::kSet, "", 0, 0, level(), {}});
    } else if (head == "Sigma" || head == "Pi" || head == "Lam") {
      std::string label = string();
      Tm dom = term();
      Tm body = term();
      Kind k = head == "Sigma" ? Kind::kSigma : head == "Pi" ? Kind::kPi : Kind::kLam;
      t = binder(k, label, dom, body);
    } else if (head == "App") {
      Tm f = term();
      t = app(f, term());
    } else if (head == "Proj1") {
      t = proj1(term());
    } else if (head == "Proj2") {
      t = proj2(term());
    } else if (head == "Eq") {
      Tm l = term();
      t = eq(l, term());
    } else if (head == "Transport") {
      Tm p = term();
      Tm e = term();
      t = transport(p, e, term());
    } else {
      error(fmt::format("unknown node {}", head));
    }
    expect(')');
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Tm parse_sexpr(std::string_view text) { return detail::SexprParser(text).parse(); }

// ---------------------------------------------------------------------------
// json

inline nlohmann::ordered_json to_json(const Tm& t) {
  using J = nlohmann::ordered_json;
  J j;
  auto node = [&](const char* n) { j["node"] = n; };
  switch (t->kind) {
    case Kind::kTop: node("Top"); break;
    case Kind::kTT: node("TT"); break;
    case Kind::kRefl: node("Refl"); break;
    case Kind::kBool: node("Bool"); break;
    case Kind::kFin: node("Fin"); j["size"] = t->a; break;
    case Kind::kBoolLit: node("BoolLit"); j["value"] = t->a != 0; break;
    case Kind::kFinLit: node("FinLit"); j["value"] = t->a; j["size"] = t->b; break;
    case Kind::kExt: node("Ext"); j["name"] = t->label; break;
    case Kind::kBVar: node("Var"); j["index"] = t->a; break;
    case Kind::kFVar:
      throw Error(ErrorKind::kValidationFailed, fmt::format("free variable {} in output", t->label));
    case Kind::kSet:
      node("Set");
      j["level"] = J{{"var", t->level.has_var}, {"offset", t->level.offset}, {"floor", t->level.floor}};
      break;
    case Kind::kSigma:
    case Kind::kPi:
    case Kind::kLam:
      node(t->kind == Kind::kSigma ? "Sigma" : t->kind == Kind::kPi ? "Pi" : "Lam");
      j["label"] = t->label;
      j["dom"] = to_json(t->kids[0]);
      j["body"] = to_json(t->kids[1]);
      break;
    case Kind::kApp: node("App"); j["fn"] = to_json(t->kids[0]); j["arg"] = to_json(t->kids[1]); break;
    case Kind::kProj1: node("Proj1"); j["term"] = to_json(t->kids[0]); break;
    case Kind::kProj2: node("Proj2"); j["term"] = to_json(t->kids[0]); break;
    case Kind::kEq: node("Eq"); j["lhs"] = to_json(t->kids[0]); j["rhs"] = to_json(t->kids[1]); break;
    case Kind::kTransport:
      node("Transport");
      j["motive"] = to_json(t->kids[0]);
      j["eq"] = to_json(t->kids[1]);
      j["term"] = to_json(t->kids[2]);
      break;
  }
  return j;
}

}  // namespace otl

// ---------------------------------------------------------------------------
// Whole artifacts.

namespace detail {

inline std::string agda_text(const Translation& t, const otl::Tm& term, const otl::Tm& type,
                             const EmitOptions& opts) {
  otl::PrintOptions po;
  po.entry_names = t.entry_names;
  po.level_arg = opts.level_arg;
  po.flatten = opts.flatten_sigma;
  std::string name(to_string(t.what));
  std::string out = fmt::format("-- {}: {}\n", t.signature, name);
  out += fmt::format("module {}-{} where\n\n", t.signature, name);
  out += "open import Agda.Primitive\n";
  out += "open import Agda.Builtin.Equality\n";
  out += "open import Agda.Builtin.Unit\n";
  out += "open import Agda.Builtin.Sigma\n\n";
  if (!opts.level_arg) out += "postulate i : Level\n\n";
  if (t.what == What::kDisplayed || t.what == What::kInduction) {
    out += "transport : ∀ {a b} {A : Set a} (P : A → Set b) {x y : A} → x ≡ y → P x → P y\n";
    out += "transport P refl t = t\n\n";
  }
  if (!t.externals.empty()) {
    out += "postulate\n";
    for (const auto& e : t.externals) out += fmt::format("  {} : {}\n", e.name, otl::show(e.type, po));
    out += "\n";
  }
  out += fmt::format("{} : {}\n", name, otl::show(type, po));
  po.multiline = true;
  out += fmt::format("{} =\n  {}\n", name, otl::show(term, po));
  return out;
}

}  // namespace detail

/// Renders a translation; fails with ValidationFailed on ill-typed output.
inline std::string emit(const Translation& t, const EmitOptions& opts) {
  otl::Validation v = otl::validate(t.term, t.externals);
  if (!v.ok) throw Error(ErrorKind::kValidationFailed, v.message);
  otl::Tm term = opts.level_arg ? otl::at_level(t.term, *opts.level_arg) : t.term;
  switch (opts.backend) {
    case Backend::kSexpr: return otl::to_sexpr(term);
    case Backend::kJson: {
      nlohmann::ordered_json j;
      j["signature"] = t.signature;
      j["what"] = std::string(to_string(t.what));
      j["externals"] = nlohmann::ordered_json::array();
      for (const auto& e : t.externals) {
        otl::Tm ty = opts.level_arg ? otl::at_level(e.type, *opts.level_arg) : e.type;
        j["externals"].push_back({{"name", e.name}, {"type", otl::to_json(ty)}});
      }
      j["term"] = otl::to_json(term);
      return j.dump(2);
    }
    case Backend::kAgdaText: {
      otl::Tm type = opts.level_arg ? otl::at_level(v.type, *opts.level_arg) : v.type;
      return detail::agda_text(t, t.term, type, opts);
    }
  }
  return "";
}

}  // namespace qiit
