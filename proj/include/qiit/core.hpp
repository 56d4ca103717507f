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

// Core syntax of the theory of signatures: de Bruijn terms and types, the
// metatheoretic layer of external sets, capture-avoiding substitution,
// normalization and conversion.
//
// Object and meta binders share one index space. Index 0 is the innermost
// binder; telescope entries of a signature are the outermost binders.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qiit::core {

// ---------------------------------------------------------------------------
// Meta level: external sets and their elements. There is no meta-level arrow;
// families over external sets only appear as binders.

struct Meta {
  struct Var {
    std::uint32_t index;
    friend bool operator==(const Var&, const Var&) = default;
  };
  /// A set declared with `external A;`, living in Set_j.
  struct Declared {
    std::string name;
    friend bool operator==(const Declared&, const Declared&) = default;
  };
  /// An opaque element declared with `external c : A;`.
  struct Const {
    std::string name;
    friend bool operator==(const Const&, const Const&) = default;
  };
  struct Bool {
    friend bool operator==(const Bool&, const Bool&) = default;
  };
  struct Fin {
    std::uint32_t size;
    friend bool operator==(const Fin&, const Fin&) = default;
  };
  /// Set_k, the universe of small external types.
  struct Universe {
    std::uint32_t level;
    friend bool operator==(const Universe&, const Universe&) = default;
  };
  struct BoolLit {
    bool value;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
  };
  struct FinLit {
    std::uint32_t value;
    std::uint32_t size;
    friend bool operator==(const FinLit&, const FinLit&) = default;
  };

  using Node =
      std::variant<Var, Declared, Const, Bool, Fin, Universe, BoolLit, FinLit>;
  Node node;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }

  friend bool operator==(const Meta&, const Meta&) = default;
};

using MetaTy = Meta;
using MetaExpr = Meta;

inline Meta meta_var(std::uint32_t i) { return Meta{Meta::Var{i}}; }
inline Meta meta_declared(std::string name) {
  return Meta{Meta::Declared{std::move(name)}};
}
inline Meta meta_const(std::string name) {
  return Meta{Meta::Const{std::move(name)}};
}
inline Meta meta_bool() { return Meta{Meta::Bool{}}; }
inline Meta meta_fin(std::uint32_t n) { return Meta{Meta::Fin{n}}; }
inline Meta meta_universe(std::uint32_t k) { return Meta{Meta::Universe{k}}; }
inline Meta meta_bool_lit(bool b) { return Meta{Meta::BoolLit{b}}; }
inline Meta meta_fin_lit(std::uint32_t k, std::uint32_t n) {
  return Meta{Meta::FinLit{k, n}};
}

// ---------------------------------------------------------------------------
// Terms and types.

struct TmNode;
struct TyNode;

class Tm {
 public:
  explicit Tm(std::shared_ptr<const TmNode> node) : node_(std::move(node)) {}
  const TmNode& node() const { return *node_; }
  const TmNode* ptr() const { return node_.get(); }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const { return as<T>() != nullptr; }

 private:
  std::shared_ptr<const TmNode> node_;
};

class Ty {
 public:
  explicit Ty(std::shared_ptr<const TyNode> node) : node_(std::move(node)) {}
  const TyNode& node() const { return *node_; }
  const TyNode* ptr() const { return node_.get(); }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const { return as<T>() != nullptr; }

 private:
  std::shared_ptr<const TyNode> node_;
};

namespace tm {
struct Var { std::uint32_t index; };
struct App { Tm fn; Tm arg; };
/// `dom` is the code of the bound variable's sort.
struct Lam { std::string name; Tm dom; Tm body; };
struct AppExt { Tm fn; Meta arg; };
struct LamExt { std::string name; Meta dom; Tm body; };
struct PiInf { std::string name; Meta dom; Tm cod; };
struct AppInf { Tm fn; Meta arg; };
struct LamInf { std::string name; Meta dom; Tm body; };
struct Id { Tm sort; Tm lhs; Tm rhs; };
struct Refl { Tm term; };
/// The canonical inhabitant every Id-typed term normalizes to.
struct Proof {};
}  // namespace tm

namespace ty {
struct U {};
struct El { Tm code; };
struct Pi { std::string name; Tm dom; Ty cod; };
struct PiExt { std::string name; Meta dom; Ty cod; };
}  // namespace ty

struct TmNode {
  std::variant<tm::Var, tm::App, tm::Lam, tm::AppExt, tm::LamExt, tm::PiInf,
               tm::AppInf, tm::LamInf, tm::Id, tm::Refl, tm::Proof>
      v;
};

struct TyNode {
  std::variant<ty::U, ty::El, ty::Pi, ty::PiExt> v;
};

template <class T>
const T* Tm::as() const { return std::get_if<T>(&node_->v); }
template <class T>
const T* Ty::as() const { return std::get_if<T>(&node_->v); }

// Constructors.

inline Tm mk(tm::Var n) { return Tm(std::make_shared<const TmNode>(TmNode{n})); }
inline Tm var(std::uint32_t i) { return mk(tm::Var{i}); }
inline Tm app(Tm f, Tm a) {
  return Tm(std::make_shared<const TmNode>(TmNode{tm::App{std::move(f), std::move(a)}}));
}
inline Tm lam(std::string name, Tm dom, Tm body) {
  return Tm(std::make_shared<const TmNode>(
      TmNode{tm::Lam{std::move(name), std::move(dom), std::move(body)}}));
}
inline Tm app_ext(Tm f, Meta a) {
  return Tm(std::make_shared<const TmNode>(TmNode{tm::AppExt{std::move(f), std::move(a)}}));
}
inline Tm lam_ext(std::string name, Meta dom, Tm body) {
  return Tm(std::make_shared<const TmNode>(
      TmNode{tm::LamExt{std::move(name), std::move(dom), std::move(body)}}));
}
inline Tm pi_inf(std::string name, Meta dom, Tm cod) {
  return Tm(std::make_shared<const TmNode>(
      TmNode{tm::PiInf{std::move(name), std::move(dom), std::move(cod)}}));
}
inline Tm app_inf(Tm f, Meta a) {
  return Tm(std::make_shared<const TmNode>(TmNode{tm::AppInf{std::move(f), std::move(a)}}));
}
inline Tm lam_inf(std::string name, Meta dom, Tm body) {
  return Tm(std::make_shared<const TmNode>(
      TmNode{tm::LamInf{std::move(name), std::move(dom), std::move(body)}}));
}
inline Tm id(Tm sort, Tm lhs, Tm rhs) {
  return Tm(std::make_shared<const TmNode>(
      TmNode{tm::Id{std::move(sort), std::move(lhs), std::move(rhs)}}));
}
inline Tm refl(Tm t) {
  return Tm(std::make_shared<const TmNode>(TmNode{tm::Refl{std::move(t)}}));
}
inline Tm proof() {
  static const Tm p(std::make_shared<const TmNode>(TmNode{tm::Proof{}}));
  return p;
}

inline Ty universe() {
  static const Ty u(std::make_shared<const TyNode>(TyNode{ty::U{}}));
  return u;
}
inline Ty el(Tm code) {
  return Ty(std::make_shared<const TyNode>(TyNode{ty::El{std::move(code)}}));
}
inline Ty pi(std::string name, Tm dom, Ty cod) {
  return Ty(std::make_shared<const TyNode>(
      TyNode{ty::Pi{std::move(name), std::move(dom), std::move(cod)}}));
}
inline Ty pi_ext(std::string name, Meta dom, Ty cod) {
  return Ty(std::make_shared<const TyNode>(
      TyNode{ty::PiExt{std::move(name), std::move(dom), std::move(cod)}}));
}

// ---------------------------------------------------------------------------
// α-equality. Binder names are ignored, so with de Bruijn indices this is
// plain structural equality.

bool operator==(const Tm& a, const Tm& b);
bool operator==(const Ty& a, const Ty& b);

inline bool operator==(const Tm& a, const Tm& b) {
  if (a.ptr() == b.ptr()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, tm::Var>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return x.fn == y.fn && x.arg == y.arg;
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          return x.dom == y.dom && x.body == y.body;
        } else if constexpr (std::is_same_v<T, tm::AppExt> ||
                             std::is_same_v<T, tm::AppInf>) {
          return x.fn == y.fn && x.arg == y.arg;
        } else if constexpr (std::is_same_v<T, tm::LamExt> ||
                             std::is_same_v<T, tm::LamInf>) {
          return x.dom == y.dom && x.body == y.body;
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          return x.dom == y.dom && x.cod == y.cod;
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          return x.sort == y.sort && x.lhs == y.lhs && x.rhs == y.rhs;
        } else if constexpr (std::is_same_v<T, tm::Refl>) {
          return x.term == y.term;
        } else {
          return true;
        }
      },
      a.node().v);
}

inline bool operator==(const Ty& a, const Ty& b) {
  if (a.ptr() == b.ptr()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, ty::U>) {
          return true;
        } else if constexpr (std::is_same_v<T, ty::El>) {
          return x.code == y.code;
        } else {
          return x.dom == y.dom && x.cod == y.cod;
        }
      },
      a.node().v);
}

// ---------------------------------------------------------------------------
// Substitutions.

/// Maps an index to another variable of whichever kind it already is.
struct Rename {
  std::uint32_t index;
  friend bool operator==(const Rename&, const Rename&) = default;
};

using SubstEntry = std::variant<Rename, Tm, Meta>;

/// σ = (e_0, …, e_{k-1} ; ↑shift): index i < k maps to e_i, index i ≥ k maps
/// to i - k + shift.
struct Substitution {
  std::vector<SubstEntry> entries;
  std::uint32_t shift = 0;

  static Substitution identity() { return {}; }
  static Substitution weaken(std::uint32_t n) { return {{}, n}; }
  /// [e/0]: instantiates the innermost binder and lowers the others.
  static Substitution single(SubstEntry e) { return {{std::move(e)}, 0}; }

  SubstEntry lookup(std::uint32_t i) const {
    if (i < entries.size()) return entries[i];
    return Rename{static_cast<std::uint32_t>(i - entries.size() + shift)};
  }

  /// The substitution to use under one more binder.
  Substitution lift() const;
};

Tm subst(const Tm& t, const Substitution& s);
Ty subst(const Ty& t, const Substitution& s);
Meta subst(const Meta& m, const Substitution& s);

namespace detail {

inline Meta shift_meta(const Meta& m, std::uint32_t by, std::uint32_t cutoff) {
  if (const auto* v = m.as<Meta::Var>(); v && v->index >= cutoff) {
    return meta_var(v->index + by);
  }
  return m;
}

Tm shift_tm(const Tm& t, std::uint32_t by, std::uint32_t cutoff);

inline Ty shift_ty(const Ty& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0) return t;
  return std::visit(
      [&](const auto& x) -> Ty {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ty::U>) {
          return t;
        } else if constexpr (std::is_same_v<T, ty::El>) {
          return el(shift_tm(x.code, by, cutoff));
        } else if constexpr (std::is_same_v<T, ty::Pi>) {
          return pi(x.name, shift_tm(x.dom, by, cutoff),
                    shift_ty(x.cod, by, cutoff + 1));
        } else {
          return pi_ext(x.name, shift_meta(x.dom, by, cutoff),
                        shift_ty(x.cod, by, cutoff + 1));
        }
      },
      t.node().v);
}

inline Tm shift_tm(const Tm& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0) return t;
  return std::visit(
      [&](const auto& x) -> Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          return x.index >= cutoff ? var(x.index + by) : t;
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return app(shift_tm(x.fn, by, cutoff), shift_tm(x.arg, by, cutoff));
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          return lam(x.name, shift_tm(x.dom, by, cutoff),
                     shift_tm(x.body, by, cutoff + 1));
        } else if constexpr (std::is_same_v<T, tm::AppExt>) {
          return app_ext(shift_tm(x.fn, by, cutoff), shift_meta(x.arg, by, cutoff));
        } else if constexpr (std::is_same_v<T, tm::LamExt>) {
          return lam_ext(x.name, shift_meta(x.dom, by, cutoff),
                         shift_tm(x.body, by, cutoff + 1));
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          return pi_inf(x.name, shift_meta(x.dom, by, cutoff),
                        shift_tm(x.cod, by, cutoff + 1));
        } else if constexpr (std::is_same_v<T, tm::AppInf>) {
          return app_inf(shift_tm(x.fn, by, cutoff), shift_meta(x.arg, by, cutoff));
        } else if constexpr (std::is_same_v<T, tm::LamInf>) {
          return lam_inf(x.name, shift_meta(x.dom, by, cutoff),
                         shift_tm(x.body, by, cutoff + 1));
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          return id(shift_tm(x.sort, by, cutoff), shift_tm(x.lhs, by, cutoff),
                    shift_tm(x.rhs, by, cutoff));
        } else if constexpr (std::is_same_v<T, tm::Refl>) {
          return refl(shift_tm(x.term, by, cutoff));
        } else {
          return t;
        }
      },
      t.node().v);
}

inline Meta subst_meta(const Meta& m, const Substitution& s, std::uint32_t depth) {
  const auto* v = m.as<Meta::Var>();
  if (!v || v->index < depth) return m;
  SubstEntry e = s.lookup(v->index - depth);
  if (const auto* r = std::get_if<Rename>(&e)) return meta_var(r->index + depth);
  if (const auto* me = std::get_if<Meta>(&e)) return shift_meta(*me, depth, 0);
  throw std::logic_error("substitution maps a meta variable to an object term");
}

Tm subst_tm(const Tm& t, const Substitution& s, std::uint32_t depth);

inline Ty subst_ty(const Ty& t, const Substitution& s, std::uint32_t depth) {
  return std::visit(
      [&](const auto& x) -> Ty {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ty::U>) {
          return t;
        } else if constexpr (std::is_same_v<T, ty::El>) {
          return el(subst_tm(x.code, s, depth));
        } else if constexpr (std::is_same_v<T, ty::Pi>) {
          return pi(x.name, subst_tm(x.dom, s, depth), subst_ty(x.cod, s, depth + 1));
        } else {
          return pi_ext(x.name, subst_meta(x.dom, s, depth),
                        subst_ty(x.cod, s, depth + 1));
        }
      },
      t.node().v);
}

inline Tm subst_tm(const Tm& t, const Substitution& s, std::uint32_t depth) {
  return std::visit(
      [&](const auto& x) -> Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          if (x.index < depth) return t;
          SubstEntry e = s.lookup(x.index - depth);
          if (const auto* r = std::get_if<Rename>(&e)) return var(r->index + depth);
          if (const auto* et = std::get_if<Tm>(&e)) return shift_tm(*et, depth, 0);
          throw std::logic_error("substitution maps an object variable to a meta value");
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return app(subst_tm(x.fn, s, depth), subst_tm(x.arg, s, depth));
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          return lam(x.name, subst_tm(x.dom, s, depth), subst_tm(x.body, s, depth + 1));
        } else if constexpr (std::is_same_v<T, tm::AppExt>) {
          return app_ext(subst_tm(x.fn, s, depth), subst_meta(x.arg, s, depth));
        } else if constexpr (std::is_same_v<T, tm::LamExt>) {
          return lam_ext(x.name, subst_meta(x.dom, s, depth),
                         subst_tm(x.body, s, depth + 1));
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          return pi_inf(x.name, subst_meta(x.dom, s, depth),
                        subst_tm(x.cod, s, depth + 1));
        } else if constexpr (std::is_same_v<T, tm::AppInf>) {
          return app_inf(subst_tm(x.fn, s, depth), subst_meta(x.arg, s, depth));
        } else if constexpr (std::is_same_v<T, tm::LamInf>) {
          return lam_inf(x.name, subst_meta(x.dom, s, depth),
                         subst_tm(x.body, s, depth + 1));
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          return id(subst_tm(x.sort, s, depth), subst_tm(x.lhs, s, depth),
                    subst_tm(x.rhs, s, depth));
        } else if constexpr (std::is_same_v<T, tm::Refl>) {
          return refl(subst_tm(x.term, s, depth));
        } else {
          return t;
        }
      },
      t.node().v);
}

inline SubstEntry shift_entry(const SubstEntry& e, std::uint32_t by) {
  return std::visit(
      [&](const auto& x) -> SubstEntry {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Rename>) {
          return Rename{x.index + by};
        } else if constexpr (std::is_same_v<T, Tm>) {
          return shift_tm(x, by, 0);
        } else {
          return shift_meta(x, by, 0);
        }
      },
      e);
}

}  // namespace detail

inline Substitution Substitution::lift() const {
  Substitution out;
  out.entries.reserve(entries.size() + 1);
  out.entries.emplace_back(Rename{0});
  for (const auto& e : entries) out.entries.push_back(detail::shift_entry(e, 1));
  out.shift = shift + 1;
  return out;
}

inline Tm subst(const Tm& t, const Substitution& s) { return detail::subst_tm(t, s, 0); }
inline Ty subst(const Ty& t, const Substitution& s) { return detail::subst_ty(t, s, 0); }
inline Meta subst(const Meta& m, const Substitution& s) {
  return detail::subst_meta(m, s, 0);
}

inline Tm shift(const Tm& t, std::uint32_t by) { return detail::shift_tm(t, by, 0); }
inline Ty shift(const Ty& t, std::uint32_t by) { return detail::shift_ty(t, by, 0); }
inline Meta shift(const Meta& m, std::uint32_t by) { return detail::shift_meta(m, by, 0); }

/// Applies `s` to a single substitution entry.
inline SubstEntry subst_entry(const SubstEntry& e, const Substitution& s) {
  return std::visit(
      [&](const auto& x) -> SubstEntry {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Rename>) {
          return s.lookup(x.index);
        } else {
          return subst(x, s);
        }
      },
      e);
}

/// compose(first, second) acts as `second` after `first`:
/// subst(subst(t, first), second) == subst(t, compose(first, second)).
inline Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  out.entries.reserve(first.entries.size() + second.entries.size());
  for (const auto& e : first.entries) out.entries.push_back(subst_entry(e, second));
  const std::size_t k2 = second.entries.size();
  for (std::size_t m = first.shift; m < k2; ++m) out.entries.push_back(second.entries[m]);
  out.shift = (first.shift > k2 ? first.shift - static_cast<std::uint32_t>(k2) : 0) +
              second.shift;
  return out;
}

// ---------------------------------------------------------------------------
// Contexts.

struct Binding {
  std::string name;
  std::variant<Ty, Meta> type;

  bool is_object() const { return std::holds_alternative<Ty>(type); }
  const Ty* object_type() const { return std::get_if<Ty>(&type); }
  const Meta* meta_type() const { return std::get_if<Meta>(&type); }
};

/// A stack of bindings. Types stored in a binding are relative to the
/// bindings before it; lookups shift them into the current scope.
class Context {
 public:
  void push(Binding b) { bindings_.push_back(std::move(b)); }
  void pop() { bindings_.pop_back(); }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  /// The binding for de Bruijn index `i`, unshifted.
  const Binding& at(std::uint32_t i) const {
    return bindings_.at(bindings_.size() - 1 - i);
  }
  const Binding& at_level(std::size_t level) const { return bindings_.at(level); }

  /// The type of object variable `i` in the current scope.
  std::optional<Ty> object_type(std::uint32_t i) const {
    if (i >= bindings_.size()) return std::nullopt;
    const Ty* t = at(i).object_type();
    if (!t) return std::nullopt;
    return shift(*t, i + 1);
  }
  std::optional<Meta> meta_type(std::uint32_t i) const {
    if (i >= bindings_.size()) return std::nullopt;
    const Meta* m = at(i).meta_type();
    if (!m) return std::nullopt;
    return shift(*m, i + 1);
  }

  const std::vector<Binding>& bindings() const { return bindings_; }

 private:
  std::vector<Binding> bindings_;
};

/// RAII guard pushing one binding for the duration of a scope.
class ScopedBinding {
 public:
  ScopedBinding(Context& ctx, Binding b) : ctx_(ctx) { ctx_.push(std::move(b)); }
  ~ScopedBinding() { ctx_.pop(); }
  ScopedBinding(const ScopedBinding&) = delete;
  ScopedBinding& operator=(const ScopedBinding&) = delete;

 private:
  Context& ctx_;
};

// ---------------------------------------------------------------------------
// Scope checking.

namespace detail {

inline bool scoped_meta(const Context& ctx, const Meta& m, std::size_t extra) {
  (void)extra;
  if (const auto* v = m.as<Meta::Var>()) {
    return v->index < ctx.size() && !ctx.at(v->index).is_object();
  }
  if (const auto* f = m.as<Meta::Fin>()) return f->size >= 1;
  if (const auto* f = m.as<Meta::FinLit>()) return f->value < f->size;
  return true;
}

}  // namespace detail

/// True when every variable refers to a binding of the right kind.
inline bool well_scoped(Context& ctx, const Tm& t);
inline bool well_scoped(Context& ctx, const Ty& t);

inline bool well_scoped(Context& ctx, const Tm& t) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          return x.index < ctx.size() && ctx.at(x.index).is_object();
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return well_scoped(ctx, x.fn) && well_scoped(ctx, x.arg);
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          if (!well_scoped(ctx, x.dom)) return false;
          ScopedBinding b(ctx, {x.name, el(x.dom)});
          return well_scoped(ctx, x.body);
        } else if constexpr (std::is_same_v<T, tm::AppExt> ||
                             std::is_same_v<T, tm::AppInf>) {
          return well_scoped(ctx, x.fn) && detail::scoped_meta(ctx, x.arg, 0);
        } else if constexpr (std::is_same_v<T, tm::LamExt> ||
                             std::is_same_v<T, tm::LamInf>) {
          if (!detail::scoped_meta(ctx, x.dom, 0)) return false;
          ScopedBinding b(ctx, {x.name, x.dom});
          return well_scoped(ctx, x.body);
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          if (!detail::scoped_meta(ctx, x.dom, 0)) return false;
          ScopedBinding b(ctx, {x.name, x.dom});
          return well_scoped(ctx, x.cod);
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          return well_scoped(ctx, x.sort) && well_scoped(ctx, x.lhs) &&
                 well_scoped(ctx, x.rhs);
        } else if constexpr (std::is_same_v<T, tm::Refl>) {
          return well_scoped(ctx, x.term);
        } else {
          return true;
        }
      },
      t.node().v);
}

inline bool well_scoped(Context& ctx, const Ty& t) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ty::U>) {
          return true;
        } else if constexpr (std::is_same_v<T, ty::El>) {
          return well_scoped(ctx, x.code);
        } else if constexpr (std::is_same_v<T, ty::Pi>) {
          if (!well_scoped(ctx, x.dom)) return false;
          ScopedBinding b(ctx, {x.name, el(x.dom)});
          return well_scoped(ctx, x.cod);
        } else {
          if (!detail::scoped_meta(ctx, x.dom, 0)) return false;
          ScopedBinding b(ctx, {x.name, x.dom});
          return well_scoped(ctx, x.cod);
        }
      },
      t.node().v);
}

/// Whether index `i` (relative to the term's root) occurs free.
inline bool occurs(std::uint32_t i, const Tm& t);

inline bool occurs_meta(std::uint32_t i, const Meta& m) {
  const auto* v = m.as<Meta::Var>();
  return v && v->index == i;
}

inline bool occurs(std::uint32_t i, const Tm& t) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          return x.index == i;
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return occurs(i, x.fn) || occurs(i, x.arg);
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          return occurs(i, x.dom) || occurs(i + 1, x.body);
        } else if constexpr (std::is_same_v<T, tm::AppExt> ||
                             std::is_same_v<T, tm::AppInf>) {
          return occurs(i, x.fn) || occurs_meta(i, x.arg);
        } else if constexpr (std::is_same_v<T, tm::LamExt> ||
                             std::is_same_v<T, tm::LamInf>) {
          return occurs_meta(i, x.dom) || occurs(i + 1, x.body);
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          return occurs_meta(i, x.dom) || occurs(i + 1, x.cod);
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          return occurs(i, x.sort) || occurs(i, x.lhs) || occurs(i, x.rhs);
        } else if constexpr (std::is_same_v<T, tm::Refl>) {
          return occurs(i, x.term);
        } else {
          return false;
        }
      },
      t.node().v);
}

inline bool occurs(std::uint32_t i, const Ty& t) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ty::U>) {
          return false;
        } else if constexpr (std::is_same_v<T, ty::El>) {
          return occurs(i, x.code);
        } else if constexpr (std::is_same_v<T, ty::Pi>) {
          return occurs(i, x.dom) || occurs(i + 1, x.cod);
        } else {
          return occurs_meta(i, x.dom) || occurs(i + 1, x.cod);
        }
      },
      t.node().v);
}

// ---------------------------------------------------------------------------
// Normalization.

Tm normalize(const Tm& t);
Ty normalize(const Ty& t);
Tm normalize(Context& ctx, const Tm& t);
Ty normalize(Context& ctx, const Ty& t);

namespace detail {

/// The type of a neutral term (a variable applied to arguments), if it can
/// be read off the context without checking anything.
inline std::optional<Ty> infer_neutral(const Context& ctx, const Tm& t) {
  if (const auto* v = t.as<tm::Var>()) return ctx.object_type(v->index);
  if (const auto* a = t.as<tm::App>()) {
    auto f = infer_neutral(ctx, a->fn);
    if (!f) return std::nullopt;
    Ty ft = normalize(*f);
    if (const auto* p = ft.as<ty::Pi>()) return subst(p->cod, Substitution::single(a->arg));
    return std::nullopt;
  }
  if (const auto* a = t.as<tm::AppExt>()) {
    auto f = infer_neutral(ctx, a->fn);
    if (!f) return std::nullopt;
    Ty ft = normalize(*f);
    if (const auto* p = ft.as<ty::PiExt>()) return subst(p->cod, Substitution::single(a->arg));
    return std::nullopt;
  }
  if (const auto* a = t.as<tm::AppInf>()) {
    auto f = infer_neutral(ctx, a->fn);
    if (!f) return std::nullopt;
    Ty ft = normalize(*f);
    if (const auto* e = ft.as<ty::El>()) {
      if (const auto* p = e->code.as<tm::PiInf>()) {
        return el(subst(p->cod, Substitution::single(a->arg)));
      }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

inline bool is_id_typed_neutral(const Context* ctx, const Tm& t) {
  if (!ctx) return false;
  auto ty = infer_neutral(*ctx, t);
  if (!ty) return false;
  Ty n = normalize(*ty);
  const auto* e = n.as<ty::El>();
  return e && e->code.is<tm::Id>();
}

Tm norm_tm(Context* ctx, const Tm& t);

inline Ty norm_ty(Context* ctx, const Ty& t) {
  return std::visit(
      [&](const auto& x) -> Ty {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ty::U>) {
          return t;
        } else if constexpr (std::is_same_v<T, ty::El>) {
          return el(norm_tm(ctx, x.code));
        } else if constexpr (std::is_same_v<T, ty::Pi>) {
          Tm d = norm_tm(ctx, x.dom);
          if (ctx) {
            ScopedBinding b(*ctx, {x.name, el(d)});
            return pi(x.name, d, norm_ty(ctx, x.cod));
          }
          return pi(x.name, d, norm_ty(ctx, x.cod));
        } else {
          if (ctx) {
            ScopedBinding b(*ctx, {x.name, x.dom});
            return pi_ext(x.name, x.dom, norm_ty(ctx, x.cod));
          }
          return pi_ext(x.name, x.dom, norm_ty(ctx, x.cod));
        }
      },
      t.node().v);
}

template <class F>
auto with_binding(Context* ctx, Binding b, F&& f) {
  if (ctx) {
    ScopedBinding g(*ctx, std::move(b));
    return f();
  }
  return f();
}

inline Tm neutral_or_proof(Context* ctx, Tm t) {
  return is_id_typed_neutral(ctx, t) ? proof() : t;
}

inline Tm norm_tm(Context* ctx, const Tm& t) {
  return std::visit(
      [&](const auto& x) -> Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          return neutral_or_proof(ctx, t);
        } else if constexpr (std::is_same_v<T, tm::App>) {
          Tm f = norm_tm(ctx, x.fn);
          Tm a = norm_tm(ctx, x.arg);
          if (const auto* l = f.as<tm::Lam>()) {
            return norm_tm(ctx, subst(l->body, Substitution::single(a)));
          }
          if (f.is<tm::Proof>()) return f;
          return neutral_or_proof(ctx, app(f, a));
        } else if constexpr (std::is_same_v<T, tm::AppExt> ||
                             std::is_same_v<T, tm::AppInf>) {
          using L = std::conditional_t<std::is_same_v<T, tm::AppExt>, tm::LamExt, tm::LamInf>;
          Tm f = norm_tm(ctx, x.fn);
          if (const auto* l = f.as<L>()) {
            return norm_tm(ctx, subst(l->body, Substitution::single(x.arg)));
          }
          if (f.is<tm::Proof>()) return f;
          if constexpr (std::is_same_v<T, tm::AppExt>) {
            return neutral_or_proof(ctx, app_ext(f, x.arg));
          } else {
            return neutral_or_proof(ctx, app_inf(f, x.arg));
          }
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          Tm d = norm_tm(ctx, x.dom);
          Tm body = with_binding(ctx, {x.name, el(d)}, [&] { return norm_tm(ctx, x.body); });
          if (const auto* a = body.as<tm::App>()) {
            const auto* v = a->arg.as<tm::Var>();
            if (v && v->index == 0 && !occurs(0, a->fn)) {
              return subst(a->fn, Substitution::single(Rename{0}));
            }
          }
          return lam(x.name, d, body);
        } else if constexpr (std::is_same_v<T, tm::LamExt> ||
                             std::is_same_v<T, tm::LamInf>) {
          using A = std::conditional_t<std::is_same_v<T, tm::LamExt>, tm::AppExt, tm::AppInf>;
          Tm body = with_binding(ctx, {x.name, x.dom}, [&] { return norm_tm(ctx, x.body); });
          if (const auto* a = body.as<A>()) {
            const auto* v = a->arg.template as<Meta::Var>();
            if (v && v->index == 0 && !occurs(0, a->fn)) {
              return subst(a->fn, Substitution::single(Rename{0}));
            }
          }
          if constexpr (std::is_same_v<T, tm::LamExt>) {
            return lam_ext(x.name, x.dom, body);
          } else {
            return lam_inf(x.name, x.dom, body);
          }
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          Tm cod = with_binding(ctx, {x.name, x.dom}, [&] { return norm_tm(ctx, x.cod); });
          return pi_inf(x.name, x.dom, cod);
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          return id(norm_tm(ctx, x.sort), norm_tm(ctx, x.lhs), norm_tm(ctx, x.rhs));
        } else if constexpr (std::is_same_v<T, tm::Refl>) {
          return proof();
        } else {
          return t;
        }
      },
      t.node().v);
}

}  // namespace detail

/// β-normal, η-short form; Refl is replaced by the proof token.
inline Tm normalize(const Tm& t) { return detail::norm_tm(nullptr, t); }
inline Ty normalize(const Ty& t) { return detail::norm_ty(nullptr, t); }

/// As above, and additionally every neutral whose type is El (Id …) becomes
/// the proof token, making Id proofs definitionally irrelevant.
inline Tm normalize(Context& ctx, const Tm& t) { return detail::norm_tm(&ctx, t); }
inline Ty normalize(Context& ctx, const Ty& t) { return detail::norm_ty(&ctx, t); }

inline bool conv(Context& ctx, const Tm& a, const Tm& b) {
  return a == b || normalize(ctx, a) == normalize(ctx, b);
}
inline bool conv(Context& ctx, const Ty& a, const Ty& b) {
  return a == b || normalize(ctx, a) == normalize(ctx, b);
}

}  // namespace qiit::core
