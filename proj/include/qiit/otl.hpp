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

// The output term language: a small dependent calculus with Π, Σ, ⊤,
// propositional equality, transport and a hierarchy of universes whose
// levels mention one free level variable i.
//
// Terms are locally nameless. Bound variables are de Bruijn indices
// (BVar); free variables (FVar) carry a process-unique id and only occur
// while a term is being built or checked.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <unordered_map>
#include <vector>

#include <fmt/core.h>

namespace qiit::otl {

// ---------------------------------------------------------------------------
// Levels: max(i + offset, floor) when has_var, otherwise the constant floor.

struct Level {
  bool has_var = false;
  std::uint32_t offset = 0;
  std::uint32_t floor = 0;

  static Level lit(std::uint32_t n) { return {false, 0, n}; }
  static Level var() { return {true, 0, 0}; }

  Level canonical() const {
    Level l = *this;
    if (l.has_var && l.floor <= l.offset) l.floor = 0;
    if (!l.has_var) l.offset = 0;
    return l;
  }

  std::uint32_t eval(std::uint32_t i) const {
    return has_var ? std::max(i + offset, floor) : floor;
  }

  friend bool operator==(const Level&, const Level&) = default;
};

inline Level suc(Level l) {
  if (l.has_var) return Level{true, l.offset + 1, l.floor == 0 ? 0 : l.floor + 1}.canonical();
  return Level::lit(l.floor + 1);
}

inline Level lmax(Level a, Level b) {
  Level r;
  r.has_var = a.has_var || b.has_var;
  r.offset = std::max(a.has_var ? a.offset : 0, b.has_var ? b.offset : 0);
  r.floor = std::max(a.floor, b.floor);
  return r.canonical();
}

/// Substitutes a concrete value for i.
inline Level at(Level l, std::uint32_t i) { return Level::lit(l.eval(i)); }

inline std::string to_string(const Level& l) {
  if (!l.has_var) return fmt::format("{}", l.floor);
  std::string base = l.offset == 0 ? "i" : fmt::format("i+{}", l.offset);
  if (l.floor == 0) return base;
  return fmt::format("max({}, {})", base, l.floor);
}

// ---------------------------------------------------------------------------
// Terms.

enum class Kind : std::uint8_t {
  kSet, kTop, kTT, kRefl, kSigma, kPi, kLam, kApp, kProj1, kProj2, kEq,
  kTransport, kBVar, kFVar, kExt, kBool, kFin, kBoolLit, kFinLit,
};

struct Node;

class Tm {
 public:
  Tm() = default;
  explicit Tm(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  const Node& operator*() const { return *n_; }
  const Node* operator->() const { return n_.get(); }
  const Node* get() const { return n_.get(); }
  explicit operator bool() const { return n_ != nullptr; }

 private:
  std::shared_ptr<const Node> n_;
};

struct Node {
  Kind kind;
  std::string label;  // binder label, FVar label, or external name
  std::uint32_t a = 0;  // BVar index, FVar id, Fin size, literal value
  std::uint32_t b = 0;  // FinLit size
  Level level;          // kSet
  std::vector<Tm> kids;
  // Derived, filled by make().
  std::size_t hash = 0;
  std::uint32_t size = 1;
  std::uint32_t loose = 0;  // 1 + highest loose BVar index, 0 if none
  bool has_fvar = false;
  bool normal = true;  // no β-redex inside
  std::uint32_t max_fvar = 0;  // largest free variable id, 0 if none
};

inline bool binds(Kind k) { return k == Kind::kSigma || k == Kind::kPi || k == Kind::kLam; }

inline Tm make(Node n) {
  std::size_t h = std::hash<int>()(static_cast<int>(n.kind)) * 1000003u;
  auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  mix(n.a);
  mix(n.b);
  mix(n.level.has_var);
  mix(n.level.offset);
  mix(n.level.floor);
  if (n.kind == Kind::kExt) mix(std::hash<std::string>()(n.label));
  std::uint32_t size = 1, loose = 0;
  bool fv = n.kind == Kind::kFVar;
  bool normal = !(n.kind == Kind::kApp && n.kids[0]->kind == Kind::kLam);
  std::uint32_t max_fvar = n.kind == Kind::kFVar ? n.a : 0;
  if (n.kind == Kind::kBVar) loose = n.a + 1;
  for (std::size_t k = 0; k < n.kids.size(); ++k) {
    const Node& c = *n.kids[k];
    mix(c.hash);
    size += c.size;
    std::uint32_t cl = c.loose;
    if (k == 1 && binds(n.kind)) cl = cl > 0 ? cl - 1 : 0;
    loose = std::max(loose, cl);
    fv = fv || c.has_fvar;
    normal = normal && c.normal;
    max_fvar = std::max(max_fvar, c.max_fvar);
  }
  n.hash = h;
  n.size = size;
  n.loose = loose;
  n.has_fvar = fv;
  n.normal = normal;
  n.max_fvar = max_fvar;
  return Tm(std::make_shared<const Node>(std::move(n)));
}

/// α-equality: labels of binders and free variables are ignored.
inline bool operator==(const Tm& x, const Tm& y) {
  if (x.get() == y.get()) return true;
  const Node& a = *x;
  const Node& b = *y;
  if (a.hash != b.hash || a.kind != b.kind || a.size != b.size) return false;
  if (a.a != b.a || a.b != b.b || !(a.level == b.level)) return false;
  if (a.kind == Kind::kExt && a.label != b.label) return false;
  for (std::size_t k = 0; k < a.kids.size(); ++k) {
    if (!(a.kids[k] == b.kids[k])) return false;
  }
  return true;
}
inline bool operator!=(const Tm& x, const Tm& y) { return !(x == y); }

struct TmHash {
  std::size_t operator()(const Tm& t) const { return t->hash; }
};

/// Node-identical: α-equal and with the same labels everywhere.
inline bool identical(const Tm& x, const Tm& y) {
  if (!(x == y)) return false;
  if (x->label != y->label) return false;
  for (std::size_t k = 0; k < x->kids.size(); ++k) {
    if (!identical(x->kids[k], y->kids[k])) return false;
  }
  return true;
}

// Constructors.

inline Tm set(Level l) { return make({Kind::kSet, "", 0, 0, l.canonical(), {}}); }
inline Tm top() { static const Tm t = make({Kind::kTop}); return t; }
inline Tm tt() { static const Tm t = make({Kind::kTT}); return t; }
inline Tm refl() { static const Tm t = make({Kind::kRefl}); return t; }
inline Tm bool_ty() { static const Tm t = make({Kind::kBool}); return t; }
inline Tm fin_ty(std::uint32_t n) { return make({Kind::kFin, "", n}); }
inline Tm bool_lit(bool v) { return make({Kind::kBoolLit, "", v ? 1u : 0u}); }
inline Tm fin_lit(std::uint32_t k, std::uint32_t n) { return make({Kind::kFinLit, "", k, n}); }
inline Tm ext(std::string name) { return make({Kind::kExt, std::move(name)}); }
inline Tm bvar(std::uint32_t i) { return make({Kind::kBVar, "", i}); }
inline Tm app(Tm f, Tm a) { return make({Kind::kApp, "", 0, 0, {}, {std::move(f), std::move(a)}}); }
inline Tm proj1(Tm t) { return make({Kind::kProj1, "", 0, 0, {}, {std::move(t)}}); }
inline Tm proj2(Tm t) { return make({Kind::kProj2, "", 0, 0, {}, {std::move(t)}}); }
inline Tm eq(Tm l, Tm r) { return make({Kind::kEq, "", 0, 0, {}, {std::move(l), std::move(r)}}); }
inline Tm transport(Tm motive, Tm e, Tm t) {
  return make({Kind::kTransport, "", 0, 0, {}, {std::move(motive), std::move(e), std::move(t)}});
}
/// Raw binder with an already-abstracted body.
inline Tm binder(Kind k, std::string label, Tm dom, Tm body) {
  return make({k, std::move(label), 0, 0, {}, {std::move(dom), std::move(body)}});
}

inline Tm app(Tm f, std::initializer_list<Tm> args) {
  for (const auto& a : args) f = app(std::move(f), a);
  return f;
}

/// Proj1 applied n times.
inline Tm proj1_n(Tm t, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) t = proj1(std::move(t));
  return t;
}

// ---------------------------------------------------------------------------
// Free variables and binding.

struct FVar {
  std::uint32_t id;
  std::string label;
  Tm term() const { return make({Kind::kFVar, label, id}); }
  operator Tm() const { return term(); }
};

inline FVar fresh(std::string label) {
  static std::atomic<std::uint32_t> counter{1};
  return FVar{counter.fetch_add(1), std::move(label)};
}

namespace detail {

inline Tm rebuild(const Node& n, std::vector<Tm> kids) {
  Node m{n.kind, n.label, n.a, n.b, n.level, std::move(kids)};
  return make(std::move(m));
}

/// Adds `by` to every BVar index >= cutoff.
inline Tm shift(const Tm& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0 || t->loose <= cutoff) return t;
  if (t->kind == Kind::kBVar) return bvar(t->a + by);
  std::vector<Tm> kids;
  kids.reserve(t->kids.size());
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    std::uint32_t c = cutoff + (k == 1 && binds(t->kind) ? 1 : 0);
    kids.push_back(shift(t->kids[k], by, c));
  }
  return rebuild(*t, std::move(kids));
}

inline Tm instantiate(const Tm& t, const Tm& v, std::uint32_t depth) {
  if (t->loose <= depth) return t;
  if (t->kind == Kind::kBVar) {
    if (t->a == depth) return shift(v, depth, 0);
    return bvar(t->a - 1);
  }
  std::vector<Tm> kids;
  kids.reserve(t->kids.size());
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    std::uint32_t d = depth + (k == 1 && binds(t->kind) ? 1 : 0);
    kids.push_back(instantiate(t->kids[k], v, d));
  }
  return rebuild(*t, std::move(kids));
}

inline Tm abstract(const Tm& t, std::uint32_t id, std::uint32_t depth) {
  if (t->max_fvar < id && t->loose <= depth) return t;
  if (t->kind == Kind::kFVar) return t->a == id ? bvar(depth) : t;
  if (t->kind == Kind::kBVar) return t->a >= depth ? bvar(t->a + 1) : t;
  std::vector<Tm> kids;
  kids.reserve(t->kids.size());
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    std::uint32_t d = depth + (k == 1 && binds(t->kind) ? 1 : 0);
    kids.push_back(abstract(t->kids[k], id, d));
  }
  return rebuild(*t, std::move(kids));
}

inline bool mentions(const Tm& t, std::uint32_t id) {
  if (t->max_fvar < id) return false;
  if (t->kind == Kind::kFVar) return t->a == id;
  for (const auto& k : t->kids) {
    if (mentions(k, id)) return true;
  }
  return false;
}

/// Replaces free variables by terms without loose bound variables.
inline Tm subst(const Tm& t, const std::unordered_map<std::uint32_t, Tm>& m, std::uint32_t min_id) {
  if (t->max_fvar < min_id) return t;
  if (t->kind == Kind::kFVar) {
    auto it = m.find(t->a);
    return it == m.end() ? t : it->second;
  }
  std::vector<Tm> kids;
  kids.reserve(t->kids.size());
  bool same = true;
  for (const auto& k : t->kids) {
    kids.push_back(subst(k, m, min_id));
    same = same && kids.back().get() == k.get();
  }
  return same ? t : rebuild(*t, std::move(kids));
}

/// As `subst`, but replacements may have loose bound variables, which are
/// shifted past the binders they are moved under.
inline Tm subst_open(const Tm& t, const std::unordered_map<std::uint32_t, Tm>& m, std::uint32_t min_id,
                     std::uint32_t depth) {
  if (t->max_fvar < min_id) return t;
  if (t->kind == Kind::kFVar) {
    auto it = m.find(t->a);
    return it == m.end() ? t : shift(it->second, depth, 0);
  }
  std::vector<Tm> kids;
  kids.reserve(t->kids.size());
  bool same = true;
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    std::uint32_t d = depth + (k == 1 && binds(t->kind) ? 1 : 0);
    kids.push_back(subst_open(t->kids[k], m, min_id, d));
    same = same && kids.back().get() == t->kids[k].get();
  }
  return same ? t : rebuild(*t, std::move(kids));
}

}  // namespace detail

inline Tm subst_open(const Tm& t, const std::unordered_map<std::uint32_t, Tm>& m, std::uint32_t depth = 0) {
  if (m.empty()) return t;
  std::uint32_t lo = UINT32_MAX;
  for (const auto& [id, v] : m) lo = std::min(lo, id);
  return detail::subst_open(t, m, lo, depth);
}

/// Lowers every loose index of `t` by `by`; nothing if one of them is below `by`.
inline std::optional<Tm> lower(const Tm& t, std::uint32_t by, std::uint32_t cutoff = 0) {
  if (by == 0 || t->loose <= cutoff) return t;
  if (t->kind == Kind::kBVar) {
    if (t->a - cutoff < by) return std::nullopt;
    return bvar(t->a - by);
  }
  std::vector<Tm> kids;
  kids.reserve(t->kids.size());
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    auto c = lower(t->kids[k], by, cutoff + (k == 1 && binds(t->kind) ? 1 : 0));
    if (!c) return std::nullopt;
    kids.push_back(*c);
  }
  return detail::rebuild(*t, std::move(kids));
}

/// Loose indices of `t`, relative to its root.
inline void loose_indices(const Tm& t, std::set<std::uint32_t>& out, std::uint32_t depth = 0) {
  if (t->loose <= depth) return;
  if (t->kind == Kind::kBVar) {
    out.insert(t->a - depth);
    return;
  }
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    loose_indices(t->kids[k], out, depth + (k == 1 && binds(t->kind) ? 1 : 0));
  }
}

inline Tm subst(const Tm& t, const std::unordered_map<std::uint32_t, Tm>& m) {
  if (m.empty()) return t;
  std::uint32_t lo = UINT32_MAX;
  for (const auto& [id, v] : m) lo = std::min(lo, id);
  return detail::subst(t, m, lo);
}

/// body[v/0] for a binder body.
inline Tm instantiate(const Tm& body, const Tm& v) { return detail::instantiate(body, v, 0); }
inline Tm abstract(const Tm& t, const FVar& x) { return detail::abstract(t, x.id, 0); }
inline bool mentions(const Tm& t, const FVar& x) { return detail::mentions(t, x.id); }
inline bool closed(const Tm& t) { return !t->has_fvar && t->loose == 0; }

inline Tm sigma(const FVar& x, Tm dom, const Tm& body) {
  return binder(Kind::kSigma, x.label, std::move(dom), abstract(body, x));
}
inline Tm pi(const FVar& x, Tm dom, const Tm& body) {
  return binder(Kind::kPi, x.label, std::move(dom), abstract(body, x));
}
inline Tm lam(const FVar& x, Tm dom, const Tm& body) {
  return binder(Kind::kLam, x.label, std::move(dom), abstract(body, x));
}
/// Non-dependent function type.
inline Tm arrow(Tm dom, Tm cod) { return binder(Kind::kPi, "_", std::move(dom), detail::shift(cod, 1, 0)); }

/// Builds a binder by handing a fresh variable to `body`.
template <class F>
Tm pi(std::string label, Tm dom, F&& body) {
  FVar x = fresh(std::move(label));
  return pi(x, std::move(dom), body(x.term()));
}
template <class F>
Tm sigma(std::string label, Tm dom, F&& body) {
  FVar x = fresh(std::move(label));
  return sigma(x, std::move(dom), body(x.term()));
}
template <class F>
Tm lam(std::string label, Tm dom, F&& body) {
  FVar x = fresh(std::move(label));
  return lam(x, std::move(dom), body(x.term()));
}

// ---------------------------------------------------------------------------
// β-normalization.

inline Tm beta(const Tm& t) {
  if (t->normal) return t;
  switch (t->kind) {
    case Kind::kApp: {
      Tm f = beta(t->kids[0]);
      Tm a = beta(t->kids[1]);
      if (f->kind == Kind::kLam) return beta(instantiate(f->kids[1], a));
      if (f.get() == t->kids[0].get() && a.get() == t->kids[1].get()) return t;
      return app(f, a);
    }
    default: {
      if (t->kids.empty()) return t;
      std::vector<Tm> kids;
      kids.reserve(t->kids.size());
      bool same = true;
      for (const auto& k : t->kids) {
        kids.push_back(beta(k));
        same = same && kids.back().get() == k.get();
      }
      if (same) return t;
      return detail::rebuild(*t, std::move(kids));
    }
  }
}

/// Applies `f` to `a` and contracts a head redex.
inline Tm apply(const Tm& f, const Tm& a) {
  if (f->kind == Kind::kLam) return instantiate(f->kids[1], a);
  return app(f, a);
}

/// Replaces every level by its value at i.
inline Tm at_level(const Tm& t, std::uint32_t i) {
  if (t->kind == Kind::kSet) return set(at(t->level, i));
  if (t->kids.empty()) return t;
  std::vector<Tm> kids;
  for (const auto& k : t->kids) kids.push_back(at_level(k, i));
  return detail::rebuild(*t, std::move(kids));
}

// ---------------------------------------------------------------------------
// Shape queries.

/// Components of a left-nested Σ-chain, outermost last; empty if `t` is
/// not such a chain ending in ⊤.
inline std::optional<std::vector<Tm>> sigma_components(Tm t) {
  std::vector<Tm> comps;
  while (t->kind == Kind::kSigma) {
    comps.push_back(t->kids[1]);
    t = t->kids[0];
  }
  if (t->kind != Kind::kTop) return std::nullopt;
  std::reverse(comps.begin(), comps.end());
  return comps;
}

/// External declaration used by the validator and the emitters.
struct ExtDecl {
  std::string name;
  Tm type;
};

}  // namespace qiit::otl
