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

// Algebras, displayed algebras, sections, homomorphisms and the induction
// predicate of a checked signature, by direct structural recursion.
//
// Every translation is a left-nested Σ-chain starting at ⊤. Entry m of a
// prefix of k entries bound to chain variable g is Proj2 (Proj1^(k-1-m) g).

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qiit/core.hpp"
#include "qiit/error.hpp"
#include "qiit/otl.hpp"
#include "qiit/signature.hpp"

namespace qiit {

enum class What { kAlgebra, kDisplayed, kSection, kMorphism, kInduction };

inline constexpr What kAllWhats[] = {What::kAlgebra, What::kDisplayed, What::kSection,
                                     What::kMorphism, What::kInduction};

inline std::string_view to_string(What w) {
  switch (w) {
    case What::kAlgebra: return "algebra";
    case What::kDisplayed: return "displayed";
    case What::kSection: return "section";
    case What::kMorphism: return "morphism";
    case What::kInduction: return "induction";
  }
  return "?";
}

inline What parse_what(std::string_view s) {
  for (What w : kAllWhats) {
    if (to_string(w) == s) return w;
  }
  throw Error(ErrorKind::kBadInput, fmt::format("unknown translation '{}'", s));
}

struct Translation {
  What what;
  otl::Tm term;
  std::vector<otl::ExtDecl> externals;
  std::string signature;
  std::vector<std::string> entry_names;
};

namespace tr {

/// Per-variable values used by the translations. Meta variables use the
/// same term in every field.
struct Slot {
  otl::Tm a0;  // algebra value (γ₀ side for morphisms)
  otl::Tm a1;  // algebra value on the γ₁ side
  otl::Tm d;   // displayed value
  otl::Tm s;   // section value
  otl::Tm m;   // morphism value

  static Slot meta(const otl::Tm& x) { return {x, x, x, x, x}; }
};

using Env = std::vector<Slot>;  // back() is de Bruijn index 0

inline const Slot& lookup(const Env& env, std::uint32_t i) { return env[env.size() - 1 - i]; }

inline std::string label(const std::string& name) {
  return name.empty() || name == "_" ? "x" : name;
}

inline otl::Tm meta(const core::Meta& m, const Env& env) {
  using core::Meta;
  return std::visit(
      [&](const auto& x) -> otl::Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Meta::Var>) {
          return lookup(env, x.index).a0;
        } else if constexpr (std::is_same_v<T, Meta::Declared> ||
                             std::is_same_v<T, Meta::Const>) {
          return otl::ext(x.name);
        } else if constexpr (std::is_same_v<T, Meta::Bool>) {
          return otl::bool_ty();
        } else if constexpr (std::is_same_v<T, Meta::Fin>) {
          return otl::fin_ty(x.size);
        } else if constexpr (std::is_same_v<T, Meta::Universe>) {
          return otl::set(otl::Level::lit(x.level));
        } else if constexpr (std::is_same_v<T, Meta::BoolLit>) {
          return otl::bool_lit(x.value);
        } else {
          return otl::fin_lit(x.value, x.size);
        }
      },
      m.node);
}

inline std::vector<otl::ExtDecl> externals(const Signature& sig) {
  std::vector<otl::ExtDecl> out;
  for (const auto& x : sig.externals) {
    if (x.type) {
      out.push_back({x.name, meta(*x.type, {})});
    } else {
      out.push_back({x.name, otl::set(otl::Level::lit(sig.level_j))});
    }
  }
  return out;
}

inline std::vector<std::string> entry_names(const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& e : sig.entries) out.push_back(e.name);
  return out;
}

inline bool is_id(const core::Tm& a) { return a.is<core::tm::Id>(); }

/// Runs `f` with one more slot in scope.
template <class F>
auto with(Env& env, Slot s, F&& f) {
  env.push_back(std::move(s));
  auto r = f();
  env.pop_back();
  return r;
}

// ---------------------------------------------------------------------------
// Algebras. `side` picks a0 or a1 from the slots.

inline otl::Tm alg_tm(const core::Tm& t, Env& env, int side);

inline otl::Tm alg_ty(const core::Ty& t, Env& env, int side) {
  using namespace core;
  if (t.is<ty::U>()) return otl::set(otl::Level::var());
  if (const auto* e = t.as<ty::El>()) return alg_tm(e->code, env, side);
  if (const auto* p = t.as<ty::Pi>()) {
    otl::FVar x = otl::fresh(label(p->name));
    otl::Tm dom = alg_tm(p->dom, env, side);
    return otl::pi(x, dom, with(env, Slot::meta(x), [&] { return alg_ty(p->cod, env, side); }));
  }
  const auto* p = t.as<ty::PiExt>();
  otl::FVar x = otl::fresh(label(p->name));
  otl::Tm dom = meta(p->dom, env);
  return otl::pi(x, dom, with(env, Slot::meta(x), [&] { return alg_ty(p->cod, env, side); }));
}

inline otl::Tm alg_tm(const core::Tm& t, Env& env, int side) {
  using namespace core;
  return std::visit(
      [&](const auto& x) -> otl::Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          const Slot& s = lookup(env, x.index);
          return side == 0 ? s.a0 : s.a1;
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return otl::app(alg_tm(x.fn, env, side), alg_tm(x.arg, env, side));
        } else if constexpr (std::is_same_v<T, tm::AppExt> || std::is_same_v<T, tm::AppInf>) {
          return otl::app(alg_tm(x.fn, env, side), meta(x.arg, env));
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          otl::FVar v = otl::fresh(label(x.name));
          otl::Tm dom = alg_tm(x.dom, env, side);
          return otl::lam(v, dom, with(env, Slot::meta(v), [&] { return alg_tm(x.body, env, side); }));
        } else if constexpr (std::is_same_v<T, tm::LamExt> || std::is_same_v<T, tm::LamInf>) {
          otl::FVar v = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          return otl::lam(v, dom, with(env, Slot::meta(v), [&] { return alg_tm(x.body, env, side); }));
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          otl::FVar v = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          return otl::pi(v, dom, with(env, Slot::meta(v), [&] { return alg_tm(x.cod, env, side); }));
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          return otl::eq(alg_tm(x.lhs, env, side), alg_tm(x.rhs, env, side));
        } else {
          return otl::refl();
        }
      },
      t.node().v);
}

// ---------------------------------------------------------------------------
// Displayed algebras.

inline otl::Tm disp_tm(const core::Tm& t, Env& env);

inline otl::Tm disp_ty(const core::Ty& t, Env& env, const otl::Tm& v) {
  using namespace core;
  if (t.is<ty::U>()) return otl::arrow(v, otl::set(otl::Level::var()));
  if (const auto* e = t.as<ty::El>()) return otl::app(disp_tm(e->code, env), v);
  if (const auto* p = t.as<ty::Pi>()) {
    otl::FVar a = otl::fresh(label(p->name));
    otl::FVar ad = otl::fresh(label(p->name) + "D");
    otl::Tm dom = alg_tm(p->dom, env, 0);
    otl::Tm ddom = otl::app(disp_tm(p->dom, env), a);
    Slot s{a, a, ad, {}, {}};
    otl::Tm body = with(env, s, [&] { return disp_ty(p->cod, env, otl::app(v, a)); });
    return otl::pi(a, dom, otl::pi(ad, ddom, body));
  }
  const auto* p = t.as<ty::PiExt>();
  otl::FVar x = otl::fresh(label(p->name));
  otl::Tm dom = meta(p->dom, env);
  return otl::pi(x, dom, with(env, Slot::meta(x), [&] { return disp_ty(p->cod, env, otl::app(v, x)); }));
}

inline otl::Tm disp_tm(const core::Tm& t, Env& env) {
  using namespace core;
  return std::visit(
      [&](const auto& x) -> otl::Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          return lookup(env, x.index).d;
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return otl::app(otl::app(disp_tm(x.fn, env), alg_tm(x.arg, env, 0)),
                          disp_tm(x.arg, env));
        } else if constexpr (std::is_same_v<T, tm::AppExt> || std::is_same_v<T, tm::AppInf>) {
          return otl::app(disp_tm(x.fn, env), meta(x.arg, env));
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          otl::FVar a = otl::fresh(label(x.name));
          otl::FVar ad = otl::fresh(label(x.name) + "D");
          otl::Tm dom = alg_tm(x.dom, env, 0);
          otl::Tm ddom = otl::app(disp_tm(x.dom, env), a);
          otl::Tm body = with(env, Slot{a, a, ad, {}, {}}, [&] { return disp_tm(x.body, env); });
          return otl::lam(a, dom, otl::lam(ad, ddom, body));
        } else if constexpr (std::is_same_v<T, tm::LamExt> || std::is_same_v<T, tm::LamInf>) {
          otl::FVar v = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          return otl::lam(v, dom, with(env, Slot::meta(v), [&] { return disp_tm(x.body, env); }));
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          otl::FVar h = otl::fresh("h");
          otl::FVar v = otl::fresh(label(x.name));
          otl::FVar w = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          otl::Tm fn_ty = otl::pi(v, dom, with(env, Slot::meta(v), [&] { return alg_tm(x.cod, env, 0); }));
          otl::Tm pred = otl::pi(w, dom, with(env, Slot::meta(w), [&] {
            return otl::app(disp_tm(x.cod, env), otl::app(h, w));
          }));
          return otl::lam(h, fn_ty, pred);
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          otl::FVar e = otl::fresh("e");
          otl::Tm base = otl::eq(alg_tm(x.lhs, env, 0), alg_tm(x.rhs, env, 0));
          otl::Tm body = otl::eq(otl::transport(disp_tm(x.sort, env), e, disp_tm(x.lhs, env)),
                                 disp_tm(x.rhs, env));
          return otl::lam(e, base, body);
        } else {
          return otl::refl();
        }
      },
      t.node().v);
}

// ---------------------------------------------------------------------------
// Sections.

inline otl::Tm sec_tm(const core::Tm& t, Env& env);

inline otl::Tm sec_ty(const core::Ty& t, Env& env, const otl::Tm& v, const otl::Tm& vd) {
  using namespace core;
  if (t.is<ty::U>()) {
    otl::FVar x = otl::fresh("x");
    return otl::pi(x, v, otl::app(vd, x));
  }
  if (const auto* e = t.as<ty::El>()) {
    if (is_id(e->code)) return otl::top();
    return otl::eq(otl::app(sec_tm(e->code, env), v), vd);
  }
  if (const auto* p = t.as<ty::Pi>()) {
    otl::FVar a = otl::fresh(label(p->name));
    otl::Tm dom = alg_tm(p->dom, env, 0);
    otl::Tm as = otl::app(sec_tm(p->dom, env), a);
    otl::Tm body = with(env, Slot{a, a, as, otl::refl(), {}}, [&] {
      return sec_ty(p->cod, env, otl::app(v, a), otl::app(otl::app(vd, a), as));
    });
    return otl::pi(a, dom, body);
  }
  const auto* p = t.as<ty::PiExt>();
  otl::FVar x = otl::fresh(label(p->name));
  otl::Tm dom = meta(p->dom, env);
  return otl::pi(x, dom, with(env, Slot::meta(x), [&] {
    return sec_ty(p->cod, env, otl::app(v, x), otl::app(vd, x));
  }));
}

inline otl::Tm sec_tm(const core::Tm& t, Env& env) {
  using namespace core;
  return std::visit(
      [&](const auto& x) -> otl::Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          return lookup(env, x.index).s;
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return otl::app(sec_tm(x.fn, env), alg_tm(x.arg, env, 0));
        } else if constexpr (std::is_same_v<T, tm::AppExt> || std::is_same_v<T, tm::AppInf>) {
          return otl::app(sec_tm(x.fn, env), meta(x.arg, env));
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          otl::FVar a = otl::fresh(label(x.name));
          otl::Tm dom = alg_tm(x.dom, env, 0);
          otl::Tm as = otl::app(sec_tm(x.dom, env), a);
          otl::Tm body = with(env, Slot{a, a, as, otl::refl(), {}}, [&] { return sec_tm(x.body, env); });
          return otl::lam(a, dom, body);
        } else if constexpr (std::is_same_v<T, tm::LamExt> || std::is_same_v<T, tm::LamInf>) {
          otl::FVar v = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          return otl::lam(v, dom, with(env, Slot::meta(v), [&] { return sec_tm(x.body, env); }));
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          otl::FVar h = otl::fresh("h");
          otl::FVar v = otl::fresh(label(x.name));
          otl::FVar w = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          otl::Tm fn_ty = otl::pi(v, dom, with(env, Slot::meta(v), [&] { return alg_tm(x.cod, env, 0); }));
          otl::Tm body = otl::lam(w, dom, with(env, Slot::meta(w), [&] {
            return otl::app(sec_tm(x.cod, env), otl::app(h, w));
          }));
          return otl::lam(h, fn_ty, body);
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          otl::FVar e = otl::fresh("e");
          otl::Tm base = otl::eq(alg_tm(x.lhs, env, 0), alg_tm(x.rhs, env, 0));
          return otl::lam(e, base, otl::refl());
        } else {
          return otl::refl();
        }
      },
      t.node().v);
}

// ---------------------------------------------------------------------------
// Homomorphisms.

inline otl::Tm mor_tm(const core::Tm& t, Env& env);

inline otl::Tm mor_ty(const core::Ty& t, Env& env, const otl::Tm& v0, const otl::Tm& v1) {
  using namespace core;
  if (t.is<ty::U>()) return otl::arrow(v0, v1);
  if (const auto* e = t.as<ty::El>()) {
    if (is_id(e->code)) return otl::top();
    return otl::eq(otl::app(mor_tm(e->code, env), v0), v1);
  }
  if (const auto* p = t.as<ty::Pi>()) {
    otl::FVar a = otl::fresh(label(p->name));
    otl::Tm dom = alg_tm(p->dom, env, 0);
    otl::Tm a1 = otl::app(mor_tm(p->dom, env), a);
    otl::Tm body = with(env, Slot{a, a1, {}, {}, otl::refl()}, [&] {
      return mor_ty(p->cod, env, otl::app(v0, a), otl::app(v1, a1));
    });
    return otl::pi(a, dom, body);
  }
  const auto* p = t.as<ty::PiExt>();
  otl::FVar x = otl::fresh(label(p->name));
  otl::Tm dom = meta(p->dom, env);
  return otl::pi(x, dom, with(env, Slot::meta(x), [&] {
    return mor_ty(p->cod, env, otl::app(v0, x), otl::app(v1, x));
  }));
}

inline otl::Tm mor_tm(const core::Tm& t, Env& env) {
  using namespace core;
  return std::visit(
      [&](const auto& x) -> otl::Tm {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tm::Var>) {
          return lookup(env, x.index).m;
        } else if constexpr (std::is_same_v<T, tm::App>) {
          return otl::app(mor_tm(x.fn, env), alg_tm(x.arg, env, 0));
        } else if constexpr (std::is_same_v<T, tm::AppExt> || std::is_same_v<T, tm::AppInf>) {
          return otl::app(mor_tm(x.fn, env), meta(x.arg, env));
        } else if constexpr (std::is_same_v<T, tm::Lam>) {
          otl::FVar a = otl::fresh(label(x.name));
          otl::Tm dom = alg_tm(x.dom, env, 0);
          otl::Tm a1 = otl::app(mor_tm(x.dom, env), a);
          otl::Tm body = with(env, Slot{a, a1, {}, {}, otl::refl()}, [&] { return mor_tm(x.body, env); });
          return otl::lam(a, dom, body);
        } else if constexpr (std::is_same_v<T, tm::LamExt> || std::is_same_v<T, tm::LamInf>) {
          otl::FVar v = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          return otl::lam(v, dom, with(env, Slot::meta(v), [&] { return mor_tm(x.body, env); }));
        } else if constexpr (std::is_same_v<T, tm::PiInf>) {
          otl::FVar h = otl::fresh("h");
          otl::FVar v = otl::fresh(label(x.name));
          otl::FVar w = otl::fresh(label(x.name));
          otl::Tm dom = meta(x.dom, env);
          otl::Tm fn_ty = otl::pi(v, dom, with(env, Slot::meta(v), [&] { return alg_tm(x.cod, env, 0); }));
          otl::Tm body = otl::lam(w, dom, with(env, Slot::meta(w), [&] {
            return otl::app(mor_tm(x.cod, env), otl::app(h, w));
          }));
          return otl::lam(h, fn_ty, body);
        } else if constexpr (std::is_same_v<T, tm::Id>) {
          otl::FVar e = otl::fresh("e");
          otl::Tm base = otl::eq(alg_tm(x.lhs, env, 0), alg_tm(x.rhs, env, 0));
          return otl::lam(e, base, otl::refl());
        } else {
          return otl::refl();
        }
      },
      t.node().v);
}

// ---------------------------------------------------------------------------
// Σ-chains over the whole telescope.

/// Value of entry m inside a prefix of k entries bound to `g`.
inline otl::Tm component(const otl::Tm& g, std::size_t k, std::size_t m) {
  return otl::proj2(otl::proj1_n(g, k - 1 - m));
}

inline otl::Tm algebra_chain(const Signature& sig, std::size_t k) {
  otl::Tm chain = otl::top();
  for (std::size_t n = 0; n < k; ++n) {
    otl::FVar g = otl::fresh("g");
    Env env;
    for (std::size_t m = 0; m < n; ++m) env.push_back(Slot::meta(component(g, n, m)));
    chain = otl::sigma(g, chain, alg_ty(sig.entries[n].type, env, 0));
  }
  return chain;
}

/// D_k(g) for an algebra prefix value g of k entries.
inline otl::Tm displayed_chain(const Signature& sig, std::size_t k, const otl::Tm& g) {
  if (k == 0) return otl::top();
  otl::Tm prev = displayed_chain(sig, k - 1, otl::proj1(g));
  otl::FVar d = otl::fresh("gD");
  Env env;
  for (std::size_t m = 0; m + 1 < k; ++m) {
    otl::Tm a = component(g, k, m);
    env.push_back({a, a, component(d, k - 1, m), {}, {}});
  }
  return otl::sigma(d, prev, disp_ty(sig.entries[k - 1].type, env, otl::proj2(g)));
}

inline otl::Tm section_chain(const Signature& sig, std::size_t k, const otl::Tm& g,
                             const otl::Tm& gd) {
  if (k == 0) return otl::top();
  otl::Tm prev = section_chain(sig, k - 1, otl::proj1(g), otl::proj1(gd));
  otl::FVar s = otl::fresh("gS");
  Env env;
  for (std::size_t m = 0; m + 1 < k; ++m) {
    otl::Tm a = component(g, k, m);
    env.push_back({a, a, component(gd, k, m), component(s, k - 1, m), {}});
  }
  return otl::sigma(s, prev, sec_ty(sig.entries[k - 1].type, env, otl::proj2(g), otl::proj2(gd)));
}

inline otl::Tm morphism_chain(const Signature& sig, std::size_t k, const otl::Tm& g0,
                              const otl::Tm& g1) {
  if (k == 0) return otl::top();
  otl::Tm prev = morphism_chain(sig, k - 1, otl::proj1(g0), otl::proj1(g1));
  otl::FVar h = otl::fresh("gM");
  Env env;
  for (std::size_t m = 0; m + 1 < k; ++m) {
    env.push_back({component(g0, k, m), component(g1, k, m), {}, {}, component(h, k - 1, m)});
  }
  return otl::sigma(h, prev, mor_ty(sig.entries[k - 1].type, env, otl::proj2(g0), otl::proj2(g1)));
}

}  // namespace tr

/// Direct-recursion translations.
inline Translation translate(const Signature& sig, What what) {
  using namespace tr;
  const std::size_t n = sig.entries.size();
  otl::Tm alg = algebra_chain(sig, n);
  otl::Tm out;
  switch (what) {
    case What::kAlgebra:
      out = alg;
      break;
    case What::kDisplayed: {
      otl::FVar g = otl::fresh("g");
      out = otl::lam(g, alg, displayed_chain(sig, n, g));
      break;
    }
    case What::kSection: {
      otl::FVar g = otl::fresh("g");
      otl::FVar gd = otl::fresh("gD");
      otl::Tm body = section_chain(sig, n, g, gd);
      out = otl::lam(g, alg, otl::lam(gd, displayed_chain(sig, n, g), body));
      break;
    }
    case What::kMorphism: {
      otl::FVar g0 = otl::fresh("g0");
      otl::FVar g1 = otl::fresh("g1");
      out = otl::lam(g0, alg, otl::lam(g1, alg, morphism_chain(sig, n, g0, g1)));
      break;
    }
    case What::kInduction: {
      otl::FVar g = otl::fresh("g");
      otl::FVar gd = otl::fresh("gD");
      otl::Tm body = otl::pi(gd, displayed_chain(sig, n, g), section_chain(sig, n, g, gd));
      out = otl::lam(g, alg, body);
      break;
    }
  }
  return {what, otl::beta(out), externals(sig), sig.name, entry_names(sig)};
}

}  // namespace qiit
