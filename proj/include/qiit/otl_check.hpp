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

// Type checker for OTL terms.
//
// Bidirectional, with binders opened to fresh free variables. Conversion
// compares canonical keys: β-normal form with transports erased, proofs of
// equations replaced by Refl, and ground terms rewritten by the equations
// available in the context. Context equations come from Eq-typed variables,
// from the Σ-components of chain variables, and from Π-quantified equations
// instantiated by matching against the terms being compared.

#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <fmt/core.h>

#include "qiit/error.hpp"
#include "qiit/otl.hpp"
#include "qiit/otl_print.hpp"

namespace qiit::otl {

/// Total order on terms up to α-equality: size, then head, then children.
inline int compare(const Tm& x, const Tm& y) {
  if (x.get() == y.get()) return 0;
  const Node& a = *x;
  const Node& b = *y;
  if (a.size != b.size) return a.size < b.size ? -1 : 1;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.a != b.a) return a.a < b.a ? -1 : 1;
  if (a.b != b.b) return a.b < b.b ? -1 : 1;
  if (a.kind == Kind::kSet) {
    auto key = [](const Level& l) { return std::tuple(l.has_var, l.offset, l.floor); };
    if (key(a.level) != key(b.level)) return key(a.level) < key(b.level) ? -1 : 1;
  }
  if (a.kind == Kind::kExt && a.label != b.label) return a.label < b.label ? -1 : 1;
  for (std::size_t k = 0; k < a.kids.size(); ++k) {
    if (int c = compare(a.kids[k], b.kids[k])) return c;
  }
  return 0;
}

/// Ground rewrite system kept inter-reduced; rules point from the larger
/// side of an equation to the smaller.
class Rules {
 public:
  Tm normalize(const Tm& t) const {
    if (map_.empty()) return t;
    std::unordered_map<const Node*, Tm> memo;
    return go(t, memo, 0);
  }

  bool add(const Tm& a, const Tm& b) {
    Tm x = normalize(a);
    Tm y = normalize(b);
    if (x == y) return false;
    if (compare(x, y) < 0) std::swap(x, y);
    // Rules mentioning the new left-hand side are taken out and re-added.
    std::vector<std::pair<Tm, Tm>> redo;
    for (auto it = rules_.begin(); it != rules_.end();) {
      if (contains(it->first, x) || contains(it->second, x)) {
        redo.push_back(*it);
        map_.erase(it->first);
        it = rules_.erase(it);
      } else {
        ++it;
      }
    }
    rules_.push_back({x, y});
    map_.emplace(x, y);
    for (const auto& [l, r] : redo) add(l, r);
    return true;
  }

  const std::vector<std::pair<Tm, Tm>>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

 private:
  static bool contains(const Tm& t, const Tm& s) {
    if (t->size < s->size) return false;
    if (t == s) return true;
    for (const auto& k : t->kids) {
      if (contains(k, s)) return true;
    }
    return false;
  }

  Tm go(const Tm& t, std::unordered_map<const Node*, Tm>& memo, int depth) const {
    if (auto it = memo.find(t.get()); it != memo.end()) return it->second;
    Tm out = t;
    if (!t->kids.empty()) {
      std::vector<Tm> kids;
      kids.reserve(t->kids.size());
      bool same = true;
      for (const auto& k : t->kids) {
        kids.push_back(go(k, memo, depth));
        same = same && kids.back().get() == k.get();
      }
      if (!same) out = detail::rebuild(*t, std::move(kids));
    }
    {
      if (auto it = map_.find(out); it != map_.end() && depth < 64) out = go(it->second, memo, depth + 1);
    }
    memo.emplace(t.get(), out);
    return out;
  }

  std::vector<std::pair<Tm, Tm>> rules_;
  std::unordered_map<Tm, Tm, TmHash> map_;
};

class Checker {
 public:
  explicit Checker(const std::vector<ExtDecl>& exts) {
    frames_.push_back(std::make_shared<Frame>());
    for (const auto& e : exts) {
      Scope s(path_, "external " + e.name);
      sort_of(e.type);
      exts_.emplace(e.name, e.type);
    }
  }

  // -------------------------------------------------------------------------
  // Judgements.

  Tm infer(const Tm& t) {
    switch (t->kind) {
      case Kind::kSet: return set(suc(t->level));
      case Kind::kTop:
      case Kind::kBool:
      case Kind::kFin: return set(Level::lit(0));
      case Kind::kTT: return top();
      case Kind::kBoolLit: return bool_ty();
      case Kind::kFinLit:
        if (t->a >= t->b) fail(fmt::format("literal {} is out of range for Fin {}", t->a, t->b));
        return fin_ty(t->b);
      case Kind::kExt: {
        auto it = exts_.find(t->label);
        if (it == exts_.end()) fail(fmt::format("unknown external {}", t->label));
        return it->second;
      }
      case Kind::kFVar: {
        auto it = types_.find(t->a);
        if (it == types_.end()) fail(fmt::format("free variable {} is not in scope", t->label));
        return it->second;
      }
      case Kind::kBVar: fail("dangling bound variable"); break;
      case Kind::kRefl: fail("cannot infer the type of refl without an expected equation"); break;
      case Kind::kSigma:
      case Kind::kPi: {
        Level l1, l2;
        {
          Scope s(path_, t->kind == Kind::kSigma ? "Σ.dom" : "Π.dom");
          l1 = sort_of(t->kids[0]);
        }
        Local x(*this, t->label, t->kids[0]);
        Scope s(path_, t->kind == Kind::kSigma ? "Σ.body" : "Π.body");
        l2 = sort_of(instantiate(t->kids[1], x.var));
        return set(lmax(l1, l2));
      }
      case Kind::kLam: {
        {
          Scope s(path_, "λ.dom");
          sort_of(t->kids[0]);
        }
        Local x(*this, t->label, t->kids[0]);
        Scope s(path_, "λ.body");
        Tm b = infer(instantiate(t->kids[1], x.var));
        return pi(x.fv, t->kids[0], b);
      }
      case Kind::kApp: {
        Tm fty;
        {
          Scope s(path_, "app.fn");
          fty = beta(infer(t->kids[0]));
        }
        if (fty->kind != Kind::kPi) fail(fmt::format("applying a non-function of type {}", show(fty)));
        {
          Scope s(path_, "app.arg");
          check(t->kids[1], fty->kids[0]);
        }
        return beta(instantiate(fty->kids[1], t->kids[1]));
      }
      case Kind::kProj1:
      case Kind::kProj2: {
        Tm sty;
        {
          Scope s(path_, t->kind == Kind::kProj1 ? "fst" : "snd");
          sty = beta(infer(t->kids[0]));
        }
        if (sty->kind != Kind::kSigma) fail(fmt::format("projecting from a non-pair of type {}", show(sty)));
        if (t->kind == Kind::kProj1) return sty->kids[0];
        return beta(instantiate(sty->kids[1], proj1(t->kids[0])));
      }
      case Kind::kEq: {
        Tm a;
        {
          Scope s(path_, "Eq.lhs");
          a = infer(t->kids[0]);
        }
        {
          Scope s(path_, "Eq.rhs");
          check(t->kids[1], a);
        }
        return set(sort_of(a));
      }
      case Kind::kTransport: {
        Tm ety;
        {
          Scope s(path_, "transport.eq");
          ety = beta(infer(t->kids[1]));
        }
        if (ety->kind != Kind::kEq) fail(fmt::format("transport along a non-equation of type {}", show(ety)));
        const Tm& x = ety->kids[0];
        const Tm& y = ety->kids[1];
        Tm a = infer(x);
        Tm mty;
        {
          Scope s(path_, "transport.motive");
          mty = beta(infer(t->kids[0]));
        }
        if (mty->kind != Kind::kPi || !is_set(beta(mty->kids[1]))) {
          fail(fmt::format("transport motive has type {}, expected a family of types", show(mty)));
        }
        if (!conv(mty->kids[0], a)) {
          fail(fmt::format("transport motive is over {}, but the equation is in {}", show(mty->kids[0]), show(a)));
        }
        {
          Scope s(path_, "transport.term");
          check(t->kids[2], beta(app(t->kids[0], x)));
        }
        return beta(app(t->kids[0], y));
      }
    }
    fail("unknown node");
    return {};
  }

  void check(const Tm& t, const Tm& expected) {
    Tm want = beta(expected);
    if (t->kind == Kind::kRefl) {
      if (want->kind != Kind::kEq) fail(fmt::format("refl checked against {}", show(want)));
      if (!conv(want->kids[0], want->kids[1])) {
        fail(fmt::format("refl does not prove {} ≡ {}", show(want->kids[0]), show(want->kids[1])));
      }
      return;
    }
    if (t->kind == Kind::kLam && want->kind == Kind::kPi) {
      {
        Scope s(path_, "λ.dom");
        sort_of(t->kids[0]);
        if (!conv(t->kids[0], want->kids[0])) {
          fail(fmt::format("λ domain {} does not match {}", show(t->kids[0]), show(want->kids[0])));
        }
      }
      Local x(*this, t->label, t->kids[0]);
      Scope s(path_, "λ.body");
      check(instantiate(t->kids[1], x.var), beta(instantiate(want->kids[1], x.var)));
      return;
    }
    Tm got = beta(infer(t));
    if (want->kind == Kind::kSet && got->kind == Kind::kSet) {
      if (!level_leq(got->level, want->level)) {
        fail(fmt::format("universe {} does not fit in {}", show(got), show(want)));
      }
      return;
    }
    if (!conv(got, want)) fail(fmt::format("expected type {}, found {}", show(want), show(got)));
  }

  /// Level of a type.
  Level sort_of(const Tm& ty) {
    Tm s = beta(infer(ty));
    if (s->kind != Kind::kSet) fail(fmt::format("{} is not a type", show(ty)));
    return s->level;
  }

  static bool level_leq(const Level& a, const Level& b) {
    for (std::uint32_t i = 0; i < 64; ++i) {
      if (a.eval(i) > b.eval(i)) return false;
    }
    return true;
  }

  // -------------------------------------------------------------------------
  // Conversion.

  bool conv(const Tm& a, const Tm& b) {
    if (a == b) return true;
    Tm x = beta(a);
    Tm y = beta(b);
    if (x == y) return true;
    const Frame& f = *frames_.back();
    if (key(x, f.rules) == key(y, f.rules)) return true;
    if (f.quantified.empty()) return false;
    return conv_instantiating(x, y, f);
  }

  /// Canonical key of a term under a rewrite system.
  Tm key(const Tm& t, const Rules& rules) {
    Tm k = beta(t);
    for (int round = 0; round < 8; ++round) {
      Tm next = beta(rules.normalize(canon(k)));
      if (next == k) break;
      k = next;
    }
    return k;
  }

  const std::string path() const {
    std::string p;
    for (const auto& s : path_) p += (p.empty() ? "" : "/") + s;
    return p.empty() ? "root" : p;
  }

 private:
  struct Quantified {
    Tm proof;
    Tm type;
  };

  struct Frame {
    Rules rules;
    std::vector<Quantified> quantified;
  };

  class Scope {
   public:
    Scope(std::vector<std::string>& path, std::string seg) : path_(path) { path_.push_back(std::move(seg)); }
    ~Scope() { path_.pop_back(); }

   private:
    std::vector<std::string>& path_;
  };

  /// A variable in scope for the lifetime of the object.
  class Local {
   public:
    Local(Checker& c, const std::string& label, const Tm& type)
        : c_(c), fv(fresh(label)), var(fv.term()) {
      c_.push(fv, type);
    }
    ~Local() { c_.pop(fv); }

   private:
    Checker& c_;

   public:
    FVar fv;
    Tm var;
  };

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::kValidationFailed, fmt::format("at {}: {}", path(), msg));
  }

  static bool is_set(const Tm& t) { return t->kind == Kind::kSet; }

  static bool mentions_eq(const Tm& t) {
    if (t->kind == Kind::kEq) return true;
    for (const auto& k : t->kids) {
      if (mentions_eq(k)) return true;
    }
    return false;
  }

  void push(const FVar& x, const Tm& type) {
    Tm ty = beta(type);
    types_.emplace(x.id, ty);
    if (!mentions_eq(ty)) {
      frames_.push_back(frames_.back());
      return;
    }
    auto f = std::make_shared<Frame>(*frames_.back());
    collect(x.term(), ty, *f, 0);
    frames_.push_back(std::move(f));
  }

  void pop(const FVar& x) {
    types_.erase(x.id);
    frames_.pop_back();
  }

  void collect(const Tm& proof, const Tm& type, Frame& f, int depth) {
    Tm ty = beta(type);
    if (!mentions_eq(ty) || depth > 4096) return;
    if (ty->kind == Kind::kEq) {
      f.rules.add(key(ty->kids[0], f.rules), key(ty->kids[1], f.rules));
    } else if (ty->kind == Kind::kSigma) {
      collect(proj1(proof), ty->kids[0], f, depth + 1);
      collect(proj2(proof), instantiate(ty->kids[1], proj1(proof)), f, depth + 1);
    } else if (ty->kind == Kind::kPi) {
      Tm cod = ty;
      while (cod->kind == Kind::kPi) cod = cod->kids[1];
      if (cod->kind == Kind::kEq) f.quantified.push_back({proof, ty});
    }
  }

  // Canonical form: transports erased, proofs of equations replaced by refl.
  Tm canon(const Tm& t) {
    if (t->loose == 0) {
      if (auto it = canon_cache_.find(t); it != canon_cache_.end()) return it->second;
      Tm c = canon_step(t);
      canon_cache_.emplace(t, c);
      return c;
    }
    return canon_step(t);
  }

  Tm canon_step(const Tm& t) {
    switch (t->kind) {
      case Kind::kTransport: return canon(t->kids[2]);
      case Kind::kSigma:
      case Kind::kPi:
      case Kind::kLam: {
        Tm dom = canon(t->kids[0]);
        FVar x = fresh(t->label);
        types_.emplace(x.id, t->kids[0]);
        Tm body = canon(instantiate(t->kids[1], x.term()));
        types_.erase(x.id);
        return binder(t->kind, t->label, dom, abstract(body, x));
      }
      case Kind::kFVar:
      case Kind::kApp:
      case Kind::kProj1:
      case Kind::kProj2: {
        if (auto ty = neutral_type(t); ty && (*ty)->kind == Kind::kEq) return refl();
        break;
      }
      default: break;
    }
    if (t->kids.empty()) return t;
    std::vector<Tm> kids;
    kids.reserve(t->kids.size());
    for (const auto& k : t->kids) kids.push_back(canon(k));
    return detail::rebuild(*t, std::move(kids));
  }

  std::optional<Tm> neutral_type(const Tm& t) {
    if (t->loose > 0) return std::nullopt;
    if (auto it = neutral_cache_.find(t); it != neutral_cache_.end()) return it->second;
    std::optional<Tm> r;
    switch (t->kind) {
      case Kind::kFVar: {
        auto it = types_.find(t->a);
        if (it != types_.end()) r = beta(it->second);
        break;
      }
      case Kind::kApp: {
        auto f = neutral_type(t->kids[0]);
        if (f && (*f)->kind == Kind::kPi) r = beta(instantiate((*f)->kids[1], t->kids[1]));
        break;
      }
      case Kind::kProj1:
      case Kind::kProj2: {
        auto p = neutral_type(t->kids[0]);
        if (p && (*p)->kind == Kind::kSigma) {
          r = t->kind == Kind::kProj1 ? (*p)->kids[0]
                                      : beta(instantiate((*p)->kids[1], proj1(t->kids[0])));
        }
        break;
      }
      default: break;
    }
    if (r) neutral_cache_.emplace(t, *r);
    return r;
  }

  // --- Π-quantified equations ---------------------------------------------

  static void subterms(const Tm& t, std::vector<Tm>& out, std::unordered_set<const Node*>& seen) {
    if (!seen.insert(t.get()).second) return;
    if (t->kind != Kind::kSet && !t->kids.empty()) out.push_back(t);
    for (const auto& k : t->kids) subterms(k, out, seen);
  }

  using Preimages = std::unordered_multimap<Tm, Tm, TmHash>;

  // Matching modulo the rules: a subject that is the normal form of some
  // left-hand side may also be matched through that left-hand side. Subjects
  // may be open; `depth` counts the binders entered below the pattern root.
  bool match(const Tm& p, const Tm& t, const std::unordered_set<std::uint32_t>& vars,
             std::unordered_map<std::uint32_t, Tm>& sub, const Preimages* pre = nullptr, int budget = 2,
             std::uint32_t depth = 0) {
    if (p->kind == Kind::kFVar && vars.count(p->a)) {
      auto v = lower(t, depth);
      if (!v) return false;
      auto [it, inserted] = sub.emplace(p->a, *v);
      return inserted || it->second == *v;
    }
    if (p->kind == Kind::kApp && p->kids[1]->kind == Kind::kBVar && p->kids[1]->a < depth &&
        p->kids[0]->kind == Kind::kFVar && vars.count(p->kids[0]->a) && !sub.count(p->kids[0]->a)) {
      // f x against t, x bound inside the pattern: f := λ x. t
      auto ft = types_.find(p->kids[0]->a);
      std::optional<Tm> body = rebind(t, p->kids[1]->a, depth, 0);
      if (body && ft != types_.end()) {
        Tm fty = beta(subst_open(ft->second, sub));
        if (fty->kind == Kind::kPi && !mentions_any(fty->kids[0], vars)) {
          sub.emplace(p->kids[0]->a, binder(Kind::kLam, "z", fty->kids[0], *body));
          return true;
        }
      }
    }
    if (match_here(p, t, vars, sub, pre, budget, depth)) return true;
    if (!pre || budget <= 0 || !p->has_fvar) return false;
    auto [lo, hi] = pre->equal_range(t);
    for (auto it = lo; it != hi; ++it) {
      auto saved = sub;
      if (match_here(p, it->second, vars, sub, pre, budget - 1, depth)) return true;
      sub = std::move(saved);
    }
    return false;
  }

  bool match_here(const Tm& p, const Tm& t, const std::unordered_set<std::uint32_t>& vars,
                  std::unordered_map<std::uint32_t, Tm>& sub, const Preimages* pre, int budget,
                  std::uint32_t depth) {
    if (p->kind == Kind::kApp) {
      // A bound variable in head position: substitute and compare.
      Tm h = p;
      while (h->kind == Kind::kApp) h = h->kids[0];
      if (h->kind == Kind::kFVar && vars.count(h->a) && sub.count(h->a)) {
        Tm q = beta(subst_open(p, sub, depth));
        if (q == t) return true;
      }
    }
    if (p->kind != t->kind || p->a != t->a || p->b != t->b || !(p->level == t->level)) return false;
    if (p->kind == Kind::kExt && p->label != t->label) return false;
    if (!p->has_fvar) return p == t;
    auto saved = sub;
    for (std::size_t k = 0; k < p->kids.size(); ++k) {
      std::uint32_t d = depth + (k == 1 && binds(p->kind) ? 1 : 0);
      if (!match(p->kids[k], t->kids[k], vars, sub, pre, budget, d)) {
        sub = std::move(saved);
        return false;
      }
    }
    return true;
  }

  static bool mentions_any(const Tm& t, const std::unordered_set<std::uint32_t>& vars) {
    if (!t->has_fvar) return false;
    if (t->kind == Kind::kFVar) return vars.count(t->a) > 0;
    for (const auto& k : t->kids) {
      if (mentions_any(k, vars)) return true;
    }
    return false;
  }

  // The body of λ x. t where x is the pattern-bound index k of a subject
  // sitting under `depth` pattern binders; nothing if t uses another of them.
  static std::optional<Tm> rebind(const Tm& t, std::uint32_t k, std::uint32_t depth, std::uint32_t inner) {
    if (t->loose <= inner) return t;
    if (t->kind == Kind::kBVar) {
      std::uint32_t rel = t->a - inner;
      if (rel == k) return bvar(inner);
      if (rel < depth) return std::nullopt;
      return bvar(t->a - depth + 1);
    }
    std::vector<Tm> kids;
    kids.reserve(t->kids.size());
    for (std::size_t i = 0; i < t->kids.size(); ++i) {
      auto c = rebind(t->kids[i], k, depth, inner + (i == 1 && binds(t->kind) ? 1 : 0));
      if (!c) return std::nullopt;
      kids.push_back(*c);
    }
    return detail::rebuild(*t, std::move(kids));
  }

  bool conv_instantiating(const Tm& a, const Tm& b, const Frame& f) {
    Rules rules = f.rules;
    for (int round = 0; round < 3; ++round) {
      Tm ka = key(a, rules);
      Tm kb = key(b, rules);
      if (ka == kb) return true;
      std::vector<Tm> pool;
      std::unordered_set<const Node*> seen;
      subterms(ka, pool, seen);
      subterms(kb, pool, seen);
      for (const auto& [l, r] : rules.rules()) {
        subterms(l, pool, seen);
        subterms(r, pool, seen);
      }
      Preimages pre;
      for (const auto& [l, r] : rules.rules()) pre.emplace(rules.normalize(r), l);
      std::vector<std::pair<Tm, Tm>> found;
      for (const auto& q : f.quantified) instances(q, rules, pool, pre, found);
      bool grew = false;
      for (const auto& [l, r] : found) grew = rules.add(l, r) || grew;
      if (!grew) break;
    }
    return key(a, rules) == key(b, rules);
  }

  struct Opened {
    std::vector<FVar> vars;
    std::vector<Tm> var_types;
    std::unordered_set<std::uint32_t> ids;
    Tm eq;
  };

  // The binders of a quantified equation opened once; the variables stay
  // registered so that canonical forms of the pattern are cached.
  const Opened& open(const Quantified& q) {
    auto it = opened_.find(q.proof);
    if (it != opened_.end()) return it->second;
    Opened o;
    Tm ty = beta(q.type);
    while (ty->kind == Kind::kPi) {
      FVar x = fresh(ty->label);
      o.vars.push_back(x);
      o.var_types.push_back(ty->kids[0]);
      o.ids.insert(x.id);
      types_.emplace(x.id, ty->kids[0]);
      ty = beta(instantiate(ty->kids[1], x.term()));
    }
    o.eq = ty;
    return opened_.emplace(q.proof, std::move(o)).first->second;
  }

  void instances(const Quantified& q, const Rules& rules, const std::vector<Tm>& pool,
                 const Preimages& pre, std::vector<std::pair<Tm, Tm>>& found) {
    const Opened& o = open(q);
    Tm l = key(o.eq->kids[0], rules);
    Tm r = key(o.eq->kids[1], rules);
    for (const Tm* side : {&l, &r}) {
      if ((*side)->kind == Kind::kFVar && o.ids.count((*side)->a)) continue;
      for (const auto& s : pool) {
        if (found.size() > 4096) break;
        std::unordered_map<std::uint32_t, Tm> sub;
        if (!match(*side, s, o.ids, sub, &pre)) continue;
        if (auto inst = instantiate_eq(o.vars, o.var_types, o.eq, sub, rules, pool)) found.push_back(*inst);
      }
    }
  }

  // A closed neutral term of the pool with type `ty`.
  std::optional<Tm> witness(const Tm& ty, const Rules& rules, const std::vector<Tm>& pool) {
    if (ty->loose > 0) return std::nullopt;
    Tm want = key(ty, rules);
    std::size_t tried = 0;
    for (const auto& t : pool) {
      if (t->loose > 0) continue;
      if (++tried > 256) break;
      auto nt = neutral_type(t);
      if (nt && key(*nt, rules) == want) return t;
    }
    return std::nullopt;
  }

  std::optional<std::pair<Tm, Tm>> instantiate_eq(const std::vector<FVar>& vars,
                                                 const std::vector<Tm>& var_types, const Tm& eq,
                                                 const std::unordered_map<std::uint32_t, Tm>& sub,
                                                 const Rules& rules, const std::vector<Tm>& pool) {
    std::unordered_map<std::uint32_t, Tm> full = sub;
    auto apply_sub = [&](const Tm& t) { return beta(subst_open(t, full)); };
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (sub.count(vars[k].id)) continue;
      // Unmatched binders need a witness: refl, or a canonical element.
      Tm vt = apply_sub(var_types[k]);
      if (vt->kind == Kind::kBool) {
        full.emplace(vars[k].id, bool_lit(true));
        continue;
      }
      if (vt->kind == Kind::kFin && vt->a > 0) {
        full.emplace(vars[k].id, fin_lit(0, vt->a));
        continue;
      }
      if (vt->kind == Kind::kSet) {
        full.emplace(vars[k].id, top());
        continue;
      }
      if (vt->kind != Kind::kEq) {
        // Only for binders the equation itself does not mention.
        if (mentions(eq, vars[k])) return std::nullopt;
        std::optional<Tm> w = witness(vt, rules, pool);
        if (!w) return std::nullopt;
        full.emplace(vars[k].id, *w);
        continue;
      }
      full.emplace(vars[k].id, refl());
      if (!(key(vt->kids[0], rules) == key(vt->kids[1], rules))) return std::nullopt;
    }
    Tm l = apply_sub(eq->kids[0]);
    Tm r = apply_sub(eq->kids[1]);
    if (l->loose > 0 || r->loose > 0) {
      // Open instances must not invent indices on either side.
      std::set<std::uint32_t> li, ri;
      loose_indices(l, li);
      loose_indices(r, ri);
      if (li != ri) return std::nullopt;
    }
    return std::pair{l, r};
  }

  std::string show(const Tm& t) const { return otl::show(t); }

  std::unordered_map<std::string, Tm> exts_;
  std::unordered_map<std::uint32_t, Tm> types_;
  std::vector<std::shared_ptr<const Frame>> frames_;
  std::unordered_map<Tm, Tm, TmHash> neutral_cache_;
  std::unordered_map<Tm, Tm, TmHash> canon_cache_;
  std::unordered_map<Tm, Opened, TmHash> opened_;
  std::vector<std::string> path_;
};

struct Validation {
  bool ok = false;
  std::string message;
  Tm type;  // inferred type when ok
};

/// Checks that `t` is a closed, well-typed OTL term over the externals.
inline Validation validate(const Tm& t, const std::vector<ExtDecl>& exts) {
  try {
    if (!closed(t)) return {false, "at root: term is not closed", {}};
    Checker c(exts);
    Tm ty = c.infer(t);
    return {true, "", ty};
  } catch (const Error& e) {
    return {false, e.what(), {}};
  }
}

inline bool otl_validate(const Tm& t, const std::vector<ExtDecl>& exts) {
  return validate(t, exts).ok;
}

}  // namespace qiit::otl
