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

// Lexer, parser, scope resolver and printer for `.qiit` source files.
//
//   file  := ("level" NAT ";")? ext* "sig" IDENT "{" entry* "}"
//   ext   := "external" IDENT (":" expr)? ";"
//   entry := IDENT ":" expr ";"
//   expr  := ("ext" | "inf")? "(" IDENT ":" expr ")" "->" expr
//          | ("ext" | "inf")? app "=>" expr
//          | "\" IDENT "." expr
//          | app
//   app   := "El" atom | "Id" atom atom atom | "Refl" atom
//          | "Fin" NAT | "Set" NAT | atom (atom | "[" expr "]")*
//   atom  := IDENT | "U" | "Bool" | "true" | "false" | "proof" | NAT
//          | "(" expr ")"

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/core.h>

#include "qiit/core.hpp"
#include "qiit/error.hpp"
#include "qiit/signature.hpp"

namespace qiit::surface {

// ---------------------------------------------------------------------------
// Raw syntax.

enum class RawKind {
  kName,
  kU,
  kEl,
  kArrow,    // args = {dom, cod}; name is the binder, empty for `=>`
  kLam,      // args = {body}
  kApp,      // args = {fn, arg}
  kMetaApp,  // args = {fn, arg}, written `f [e]`
  kId,       // args = {sort, lhs, rhs}
  kRefl,     // args = {term}
  kProof,
  kBool,
  kFin,      // number = size
  kSet,      // number = level
  kTrue,
  kFalse,
  kNat,      // number = value
};

enum class Marker { kNone, kExt, kInf };

enum class NameRef { kUnresolved, kEntry, kLocal, kExternalSet, kExternalConst };

struct RawExpr {
  RawKind kind = RawKind::kName;
  std::string name;
  std::uint32_t number = 0;
  Marker marker = Marker::kNone;
  std::vector<RawExpr> args;
  SourceSpan span;
  // Filled in by resolve: entries count from 0, locals continue after the
  // entries visible at the point of use.
  NameRef ref = NameRef::kUnresolved;
  std::uint32_t level = 0;
};

struct RawExternal {
  std::string name;
  std::optional<RawExpr> type;
  SourceSpan span;
};

struct RawEntry {
  std::string name;
  RawExpr type;
  SourceSpan span;
};

struct RawSignature {
  std::string name;
  std::uint32_t level = 0;
  std::vector<RawExternal> externals;
  std::vector<RawEntry> entries;
  SourceSpan span;
};

// ---------------------------------------------------------------------------
// Lexer.

enum class Tok {
  kIdent, kNat, kLParen, kRParen, kLBracket, kRBracket, kLBrace, kRBrace,
  kColon, kSemi, kArrow, kFatArrow, kBackslash, kDot, kEnd,
  // keywords
  kLevel, kExternal, kSig, kU, kEl, kId, kRefl, kBool, kFin, kSet, kTrue,
  kFalse, kExt, kInf, kProof,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

inline std::string_view describe(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kNat: return "number";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kColon: return "':'";
    case Tok::kSemi: return "';'";
    case Tok::kArrow: return "'->'";
    case Tok::kFatArrow: return "'=>'";
    case Tok::kBackslash: return "'\\'";
    case Tok::kDot: return "'.'";
    case Tok::kEnd: return "end of input";
    case Tok::kLevel: return "'level'";
    case Tok::kExternal: return "'external'";
    case Tok::kSig: return "'sig'";
    case Tok::kU: return "'U'";
    case Tok::kEl: return "'El'";
    case Tok::kId: return "'Id'";
    case Tok::kRefl: return "'Refl'";
    case Tok::kBool: return "'Bool'";
    case Tok::kFin: return "'Fin'";
    case Tok::kSet: return "'Set'";
    case Tok::kTrue: return "'true'";
    case Tok::kFalse: return "'false'";
    case Tok::kExt: return "'ext'";
    case Tok::kInf: return "'inf'";
    case Tok::kProof: return "'proof'";
  }
  return "token";
}

inline const std::map<std::string, Tok, std::less<>>& keywords() {
  static const std::map<std::string, Tok, std::less<>> kw = {
      {"level", Tok::kLevel}, {"external", Tok::kExternal}, {"sig", Tok::kSig},
      {"U", Tok::kU},         {"El", Tok::kEl},             {"Id", Tok::kId},
      {"Refl", Tok::kRefl},   {"Bool", Tok::kBool},         {"Fin", Tok::kFin},
      {"Set", Tok::kSet},     {"true", Tok::kTrue},         {"false", Tok::kFalse},
      {"ext", Tok::kExt},     {"inf", Tok::kInf},           {"proof", Tok::kProof},
  };
  return kw;
}

inline bool is_keyword(std::string_view s) { return keywords().count(s) != 0; }

inline bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}
inline bool ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80;
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::uint32_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceSpan sp{line, col, static_cast<std::uint32_t>(i), 0};
    auto emit = [&](Tok k, std::size_t len) {
      sp.length = static_cast<std::uint32_t>(len);
      out.push_back({k, std::string(src.substr(i, len)), sp});
      advance(len);
    };
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j - i > 9) {
        throw Error(ErrorKind::kSyntax, "number literal too large",
                    {line, col, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j - i)});
      }
      emit(Tok::kNat, j - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(static_cast<unsigned char>(src[j]))) ++j;
      std::string_view word = src.substr(i, j - i);
      auto kw = keywords().find(word);
      emit(kw == keywords().end() ? Tok::kIdent : kw->second, j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "->") { emit(Tok::kArrow, 2); continue; }
    if (two == "=>") { emit(Tok::kFatArrow, 2); continue; }
    switch (c) {
      case '(': emit(Tok::kLParen, 1); continue;
      case ')': emit(Tok::kRParen, 1); continue;
      case '[': emit(Tok::kLBracket, 1); continue;
      case ']': emit(Tok::kRBracket, 1); continue;
      case '{': emit(Tok::kLBrace, 1); continue;
      case '}': emit(Tok::kRBrace, 1); continue;
      case ':': emit(Tok::kColon, 1); continue;
      case ';': emit(Tok::kSemi, 1); continue;
      case '\\': emit(Tok::kBackslash, 1); continue;
      case '.': emit(Tok::kDot, 1); continue;
      default: break;
    }
    throw Error(ErrorKind::kSyntax,
                fmt::format("unexpected character '{}'", static_cast<char>(c)),
                {line, col, static_cast<std::uint32_t>(i), 1});
  }
  out.push_back({Tok::kEnd, "", {line, col, static_cast<std::uint32_t>(src.size()), 0}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser.

namespace detail {

inline SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  std::uint32_t end = std::max(a.offset + a.length, b.offset + b.length);
  s.length = end - a.offset;
  return s;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  RawSignature file() {
    RawSignature sig;
    SourceSpan start = peek().span;
    if (at(Tok::kLevel)) {
      next();
      sig.level = nat();
      expect(Tok::kSemi);
    }
    std::set<std::string> seen;
    while (at(Tok::kExternal)) {
      next();
      RawExternal ext;
      ext.span = peek().span;
      ext.name = ident();
      if (!seen.insert(ext.name).second) {
        throw Error(ErrorKind::kDuplicateName,
                    fmt::format("duplicate name '{}'", ext.name), ext.span);
      }
      if (at(Tok::kColon)) {
        next();
        ext.type = expr();
      }
      expect(Tok::kSemi);
      sig.externals.push_back(std::move(ext));
    }
    expect(Tok::kSig);
    sig.name = ident();
    expect(Tok::kLBrace);
    while (!at(Tok::kRBrace)) {
      RawEntry e;
      e.span = peek().span;
      if (!at(Tok::kIdent)) fail("entry name or '}'");
      e.name = ident();
      if (!seen.insert(e.name).second) {
        throw Error(ErrorKind::kDuplicateName,
                    fmt::format("duplicate name '{}'", e.name), e.span);
      }
      expect(Tok::kColon);
      e.type = expr();
      expect(Tok::kSemi);
      sig.entries.push_back(std::move(e));
    }
    SourceSpan end = peek().span;
    expect(Tok::kRBrace);
    if (!at(Tok::kEnd)) fail("end of input");
    sig.span = cover(start, end);
    return sig;
  }

  RawExpr expr() {
    const Token& t = peek();
    if (t.kind == Tok::kBackslash) {
      next();
      RawExpr lam;
      lam.kind = RawKind::kLam;
      lam.name = ident();
      expect(Tok::kDot);
      lam.args.push_back(expr());
      lam.span = cover(t.span, lam.args.back().span);
      return lam;
    }
    Marker marker = Marker::kNone;
    SourceSpan start = t.span;
    if (t.kind == Tok::kExt || t.kind == Tok::kInf) {
      marker = t.kind == Tok::kExt ? Marker::kExt : Marker::kInf;
      next();
    }
    if (at(Tok::kLParen) && at(Tok::kIdent, 1) && at(Tok::kColon, 2)) {
      next();
      RawExpr arrow;
      arrow.kind = RawKind::kArrow;
      arrow.marker = marker;
      arrow.name = ident();
      expect(Tok::kColon);
      arrow.args.push_back(expr());
      expect(Tok::kRParen);
      expect(Tok::kArrow);
      arrow.args.push_back(expr());
      arrow.span = cover(start, arrow.args.back().span);
      return arrow;
    }
    RawExpr lhs = app();
    if (at(Tok::kFatArrow)) {
      next();
      RawExpr arrow;
      arrow.kind = RawKind::kArrow;
      arrow.marker = marker;
      arrow.args.push_back(std::move(lhs));
      arrow.args.push_back(expr());
      arrow.span = cover(start, arrow.args.back().span);
      return arrow;
    }
    if (marker != Marker::kNone) fail("'=>' after marked domain");
    return lhs;
  }

 private:
  RawExpr app() {
    const Token& t = peek();
    auto leaf = [&](RawKind k, std::uint32_t n = 0) {
      RawExpr e;
      e.kind = k;
      e.number = n;
      return e;
    };
    switch (t.kind) {
      case Tok::kEl: {
        next();
        RawExpr e = leaf(RawKind::kEl);
        e.args.push_back(atom());
        e.span = cover(t.span, e.args.back().span);
        return e;
      }
      case Tok::kId: {
        next();
        RawExpr e = leaf(RawKind::kId);
        for (int k = 0; k < 3; ++k) e.args.push_back(atom());
        e.span = cover(t.span, e.args.back().span);
        return e;
      }
      case Tok::kRefl: {
        next();
        RawExpr e = leaf(RawKind::kRefl);
        e.args.push_back(atom());
        e.span = cover(t.span, e.args.back().span);
        return e;
      }
      case Tok::kFin:
      case Tok::kSet: {
        next();
        SourceSpan ns = peek().span;
        std::uint32_t n = nat();
        RawExpr e = leaf(t.kind == Tok::kFin ? RawKind::kFin : RawKind::kSet, n);
        e.span = cover(t.span, ns);
        if (t.kind == Tok::kFin && n == 0) {
          throw Error(ErrorKind::kSyntax, "Fin 0 is empty; Fin needs a positive size", e.span);
        }
        return e;
      }
      default: break;
    }
    RawExpr head = atom();
    for (;;) {
      if (at(Tok::kLBracket)) {
        next();
        RawExpr e;
        e.kind = RawKind::kMetaApp;
        e.args.push_back(std::move(head));
        e.args.push_back(expr());
        SourceSpan close = peek().span;
        expect(Tok::kRBracket);
        e.span = cover(e.args.front().span, close);
        head = std::move(e);
      } else if (starts_atom()) {
        RawExpr e;
        e.kind = RawKind::kApp;
        e.args.push_back(std::move(head));
        e.args.push_back(atom());
        e.span = cover(e.args.front().span, e.args.back().span);
        head = std::move(e);
      } else {
        return head;
      }
    }
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::kIdent: case Tok::kU: case Tok::kBool: case Tok::kTrue:
      case Tok::kFalse: case Tok::kProof: case Tok::kNat: case Tok::kLParen:
        return true;
      default:
        return false;
    }
  }

  RawExpr atom() {
    Token t = peek();
    RawExpr e;
    e.span = t.span;
    switch (t.kind) {
      case Tok::kIdent: next(); e.kind = RawKind::kName; e.name = t.text; return e;
      case Tok::kU: next(); e.kind = RawKind::kU; return e;
      case Tok::kBool: next(); e.kind = RawKind::kBool; return e;
      case Tok::kTrue: next(); e.kind = RawKind::kTrue; return e;
      case Tok::kFalse: next(); e.kind = RawKind::kFalse; return e;
      case Tok::kProof: next(); e.kind = RawKind::kProof; return e;
      case Tok::kNat: e.kind = RawKind::kNat; e.number = nat(); return e;
      case Tok::kLParen: {
        next();
        RawExpr inner = expr();
        SourceSpan close = peek().span;
        expect(Tok::kRParen);
        inner.span = cover(t.span, close);
        return inner;
      }
      default: fail("identifier, number or '('");
    }
  }

  std::uint32_t nat() {
    if (!at(Tok::kNat)) fail("number");
    return static_cast<std::uint32_t>(std::stoul(next().text));
  }

  std::string ident() {
    if (!at(Tok::kIdent)) fail("identifier");
    return next().text;
  }

  void expect(Tok k) {
    if (!at(k)) fail(describe(k));
    next();
  }

  [[noreturn]] void fail(std::string_view expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : fmt::format("'{}'", t.text);
    throw Error(ErrorKind::kSyntax, fmt::format("expected {}, found {}", expected, found),
                t.span);
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RawSignature parse(std::string_view text) { return detail::Parser(text).file(); }

/// Parses a single expression (used by tests and tools).
inline RawExpr parse_expr(std::string_view text) { return detail::Parser(text).expr(); }

// ---------------------------------------------------------------------------
// Scope resolution.

namespace detail {

class Resolver {
 public:
  explicit Resolver(const RawSignature& sig) : sig_(sig) {}

  void expr(RawExpr& e) {
    switch (e.kind) {
      case RawKind::kName: name(e); return;
      case RawKind::kArrow:
        expr(e.args[0]);
        bind(e.name, [&] { expr(e.args[1]); });
        return;
      case RawKind::kLam:
        bind(e.name, [&] { expr(e.args[0]); });
        return;
      default:
        for (auto& a : e.args) expr(a);
    }
  }

  void set_entry_count(std::uint32_t n) {
    entries_ = n;
    locals_.clear();
  }

 private:
  template <class F>
  void bind(const std::string& n, F&& body) {
    locals_.push_back(n);
    body();
    locals_.pop_back();
  }

  void name(RawExpr& e) {
    for (std::size_t k = locals_.size(); k-- > 0;) {
      if (!locals_[k].empty() && locals_[k] == e.name) {
        e.ref = NameRef::kLocal;
        e.level = entries_ + static_cast<std::uint32_t>(k);
        return;
      }
    }
    for (std::uint32_t m = 0; m < entries_; ++m) {
      if (sig_.entries[m].name == e.name) {
        e.ref = NameRef::kEntry;
        e.level = m;
        return;
      }
    }
    for (const auto& x : sig_.externals) {
      if (x.name == e.name) {
        e.ref = x.type ? NameRef::kExternalConst : NameRef::kExternalSet;
        return;
      }
    }
    throw Error(ErrorKind::kUnboundName, fmt::format("unbound name '{}'", e.name), e.span);
  }

  const RawSignature& sig_;
  std::uint32_t entries_ = 0;
  std::vector<std::string> locals_;
};

}  // namespace detail

/// Annotates every identifier with the binder it refers to.
inline RawSignature resolve(RawSignature raw) {
  detail::Resolver r(raw);
  for (std::size_t k = 0; k < raw.externals.size(); ++k) {
    if (!raw.externals[k].type) continue;
    // An external constant's type may only mention earlier externals.
    RawSignature prefix;
    prefix.externals.assign(raw.externals.begin(), raw.externals.begin() + k);
    detail::Resolver pr(prefix);
    pr.expr(*raw.externals[k].type);
  }
  for (std::size_t k = 0; k < raw.entries.size(); ++k) {
    r.set_entry_count(static_cast<std::uint32_t>(k));
    r.expr(raw.entries[k].type);
  }
  return raw;
}

// ---------------------------------------------------------------------------
// Printing core syntax back to source text.

/// Prints core terms with names. The name stack mirrors the kernel context:
/// back() is de Bruijn index 0.
class Printer {
 public:
  explicit Printer(std::vector<std::string> globals = {}) : globals_(std::move(globals)) {}

  void push(std::string name) { names_.push_back(std::move(name)); }
  void pop() { names_.pop_back(); }
  std::vector<std::string>& names() { return names_; }

  std::string ty(const core::Ty& t) { return ty_at(t, 0); }
  std::string tm(const core::Tm& t) { return tm_at(t, 0); }
  std::string meta(const core::Meta& m) { return meta_at(m, 0); }

  /// A binder name that does not clash with anything visible.
  std::string fresh(std::string base) {
    if (base.empty() || base == "_") base = "x";
    auto taken = [&](const std::string& n) {
      return is_keyword(n) ||
             std::find(names_.begin(), names_.end(), n) != names_.end() ||
             std::find(globals_.begin(), globals_.end(), n) != globals_.end();
    };
    while (taken(base)) base += '\'';
    return base;
  }

 private:
  // Precedence: 0 = arrow/lambda, 1 = application, 2 = atom.
  static std::string paren(std::string s, bool wrap) { return wrap ? "(" + s + ")" : s; }

  std::string var_name(std::uint32_t i) const {
    if (i < names_.size()) return names_[names_.size() - 1 - i];
    return fmt::format("#{}", i);
  }

  template <class F>
  std::string under(const std::string& n, F&& f) {
    names_.push_back(n);
    std::string s = f();
    names_.pop_back();
    return s;
  }

  static std::string marker(Marker m) {
    return m == Marker::kExt ? "ext " : m == Marker::kInf ? "inf " : "";
  }

  // Renders an arrow whose domain is `dom_text` (already printed at the right
  // precedence for its form).
  template <class Dom, class Cod>
  std::string arrow(Marker m, const std::string& bname, bool dependent, Dom&& dom, Cod&& cod,
                    int prec) {
    std::string s;
    if (dependent) {
      std::string n = fresh(bname);
      std::string d = dom(0);
      s = fmt::format("{}({} : {}) -> {}", marker(m), n, d, under(n, [&] { return cod(); }));
    } else {
      std::string d = dom(1);
      s = fmt::format("{}{} => {}", marker(m), d, under("", [&] { return cod(); }));
    }
    return paren(s, prec > 0);
  }

  std::string ty_at(const core::Ty& t, int prec) {
    using namespace core;
    if (t.is<ty::U>()) return "U";
    if (const auto* e = t.as<ty::El>()) return paren("El " + tm_at(e->code, 2), prec > 1);
    if (const auto* p = t.as<ty::Pi>()) {
      return arrow(Marker::kNone, p->name, occurs(0, p->cod),
                   [&](int dp) { return tm_at(p->dom, dp); }, [&] { return ty_at(p->cod, 0); },
                   prec);
    }
    const auto* p = t.as<ty::PiExt>();
    return arrow(Marker::kExt, p->name, occurs(0, p->cod),
                 [&](int dp) { return meta_at(p->dom, dp); }, [&] { return ty_at(p->cod, 0); },
                 prec);
  }

  std::string tm_at(const core::Tm& t, int prec) {
    using namespace core;
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, tm::Var>) {
            return var_name(x.index);
          } else if constexpr (std::is_same_v<T, tm::App>) {
            return paren(tm_at(x.fn, 1) + " " + tm_at(x.arg, 2), prec > 1);
          } else if constexpr (std::is_same_v<T, tm::AppExt> || std::is_same_v<T, tm::AppInf>) {
            return paren(tm_at(x.fn, 1) + " [" + meta_at(x.arg, 0) + "]", prec > 1);
          } else if constexpr (std::is_same_v<T, tm::Lam> || std::is_same_v<T, tm::LamExt> ||
                               std::is_same_v<T, tm::LamInf>) {
            std::string n = fresh(x.name);
            return paren(fmt::format("\\{}. {}", n, under(n, [&] { return tm_at(x.body, 0); })),
                         prec > 0);
          } else if constexpr (std::is_same_v<T, tm::PiInf>) {
            return arrow(Marker::kInf, x.name, occurs(0, x.cod),
                         [&](int dp) { return meta_at(x.dom, dp); },
                         [&] { return tm_at(x.cod, 0); }, prec);
          } else if constexpr (std::is_same_v<T, tm::Id>) {
            return paren(fmt::format("Id {} {} {}", tm_at(x.sort, 2), tm_at(x.lhs, 2),
                                     tm_at(x.rhs, 2)),
                         prec > 1);
          } else if constexpr (std::is_same_v<T, tm::Refl>) {
            return paren("Refl " + tm_at(x.term, 2), prec > 1);
          } else {
            return "proof";
          }
        },
        t.node().v);
  }

  std::string meta_at(const core::Meta& m, int prec) {
    using core::Meta;
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Meta::Var>) {
            return var_name(x.index);
          } else if constexpr (std::is_same_v<T, Meta::Declared> ||
                               std::is_same_v<T, Meta::Const>) {
            return x.name;
          } else if constexpr (std::is_same_v<T, Meta::Bool>) {
            return "Bool";
          } else if constexpr (std::is_same_v<T, Meta::Fin>) {
            return paren(fmt::format("Fin {}", x.size), prec > 1);
          } else if constexpr (std::is_same_v<T, Meta::Universe>) {
            return paren(fmt::format("Set {}", x.level), prec > 1);
          } else if constexpr (std::is_same_v<T, Meta::BoolLit>) {
            return x.value ? "true" : "false";
          } else {
            return fmt::format("{}", x.value);
          }
        },
        m.node);
  }

  std::vector<std::string> globals_;
  std::vector<std::string> names_;
};

/// Global names of a signature, visible everywhere in it.
inline std::vector<std::string> global_names(const Signature& sig) {
  std::vector<std::string> g;
  for (const auto& x : sig.externals) g.push_back(x.name);
  for (const auto& e : sig.entries) g.push_back(e.name);
  return g;
}

inline std::string print(const Signature& sig) {
  std::string out;
  if (sig.level_j != 0) out += fmt::format("level {};\n", sig.level_j);
  Printer p(global_names(sig));
  for (const auto& x : sig.externals) {
    if (x.type) {
      out += fmt::format("external {} : {};\n", x.name, p.meta(*x.type));
    } else {
      out += fmt::format("external {};\n", x.name);
    }
  }
  if (sig.entries.empty()) return out + fmt::format("sig {} {{ }}\n", sig.name);
  out += fmt::format("sig {} {{\n", sig.name);
  for (const auto& e : sig.entries) {
    out += fmt::format("  {} : {};\n", e.name, p.ty(e.type));
    p.push(e.name);
  }
  out += "}\n";
  return out;
}

/// Prints a type living in the context of the first `count` entries.
inline std::string print_in(const Signature& sig, std::size_t count, const core::Ty& t) {
  Printer p(global_names(sig));
  for (std::size_t k = 0; k < count; ++k) p.push(sig.entries[k].name);
  return p.ty(t);
}

}  // namespace qiit::surface
