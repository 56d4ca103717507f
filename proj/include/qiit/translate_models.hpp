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

// Signatures as folds over a ToS-model interface.
//
// A model supplies one operation per former of the core syntax; `fold_signature`
// walks a checked telescope and calls them. Two models are provided: the total
// model of algebras, displayed algebras and sections, and the model of
// homomorphisms. Semantic types are OTL families with explicit parameters.

#pragma once

#include <concepts>
#include <functional>
#include <string>
#include <vector>

#include "qiit/core.hpp"
#include "qiit/otl.hpp"
#include "qiit/signature.hpp"
#include "qiit/translate.hpp"

namespace qiit::model {

/// An OTL term abstracted over some free variables.
struct Family {
  std::vector<otl::FVar> params;
  otl::Tm body;

  otl::Tm at(std::initializer_list<otl::Tm> args) const {
    otl::Tm t = body;
    auto it = args.begin();
    for (const auto& p : params) t = otl::instantiate(otl::abstract(t, p), *it++);
    return t;
  }
};

template <class F>
Family family1(F&& f) {
  otl::FVar v = otl::fresh("v");
  return {{v}, f(v.term())};
}

template <class F>
Family family2(F&& f) {
  otl::FVar v = otl::fresh("v");
  otl::FVar w = otl::fresh("w");
  return {{v, w}, f(v.term(), w.term())};
}

inline otl::Tm replace(const otl::Tm& t, const otl::FVar& x, const otl::Tm& v) {
  return otl::instantiate(otl::abstract(t, x), v);
}

// clang-format off
template <class M>
concept TosModel = requires(M m, const typename M::Val& v, const typename M::Con& c,
                            const std::string& n, const otl::Tm& t,
                            std::function<typename M::Ty(const typename M::Val&)> ty_fn,
                            std::function<typename M::Val(const typename M::Val&)> tm_fn,
                            std::function<typename M::Ty(const std::vector<typename M::Val>&)> build) {
  { m.U() } -> std::same_as<typename M::Ty>;
  { m.El(v) } -> std::same_as<typename M::Ty>;
  { m.Pi(n, v, ty_fn) } -> std::same_as<typename M::Ty>;
  { m.PiExt(n, v, ty_fn) } -> std::same_as<typename M::Ty>;
  { m.app(v, v) } -> std::same_as<typename M::Val>;
  { m.app_meta(v, v) } -> std::same_as<typename M::Val>;
  { m.lam(n, v, tm_fn) } -> std::same_as<typename M::Val>;
  { m.lam_meta(n, v, tm_fn) } -> std::same_as<typename M::Val>;
  { m.pi_inf(n, v, tm_fn) } -> std::same_as<typename M::Val>;
  { m.id(v, v, v) } -> std::same_as<typename M::Val>;
  { m.refl() } -> std::same_as<typename M::Val>;
  { m.lift(t) } -> std::same_as<typename M::Val>;
  { m.empty() } -> std::same_as<typename M::Con>;
  { m.extend(c, n, build) } -> std::same_as<typename M::Con>;
};
// clang-format on

/// Interprets core syntax in a model, with `env` holding the semantic values
/// of the variables in scope (back() is index 0).
template <TosModel M>
class Fold {
 public:
  using Val = typename M::Val;
  using Ty = typename M::Ty;

  Fold(M& m, std::vector<Val> env) : m_(m), env_(std::move(env)) {}

  Ty ty(const core::Ty& t) {
    using namespace core;
    if (t.is<ty::U>()) return m_.U();
    if (const auto* e = t.as<ty::El>()) return m_.El(tm(e->code));
    if (const auto* p = t.as<ty::Pi>()) {
      return m_.Pi(p->name, tm(p->dom), [&](const Val& x) { return under(x, [&] { return ty(p->cod); }); });
    }
    const auto* p = t.as<ty::PiExt>();
    return m_.PiExt(p->name, meta(p->dom),
                    [&](const Val& x) { return under(x, [&] { return ty(p->cod); }); });
  }

  Val tm(const core::Tm& t) {
    using namespace core;
    return std::visit(
        [&](const auto& x) -> Val {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, tm::Var>) {
            return env_[env_.size() - 1 - x.index];
          } else if constexpr (std::is_same_v<T, tm::App>) {
            return m_.app(tm(x.fn), tm(x.arg));
          } else if constexpr (std::is_same_v<T, tm::AppExt> || std::is_same_v<T, tm::AppInf>) {
            return m_.app_meta(tm(x.fn), meta(x.arg));
          } else if constexpr (std::is_same_v<T, tm::Lam>) {
            return m_.lam(x.name, tm(x.dom),
                          [&](const Val& v) { return under(v, [&] { return tm(x.body); }); });
          } else if constexpr (std::is_same_v<T, tm::LamExt> || std::is_same_v<T, tm::LamInf>) {
            return m_.lam_meta(x.name, meta(x.dom),
                               [&](const Val& v) { return under(v, [&] { return tm(x.body); }); });
          } else if constexpr (std::is_same_v<T, tm::PiInf>) {
            return m_.pi_inf(x.name, meta(x.dom),
                             [&](const Val& v) { return under(v, [&] { return tm(x.cod); }); });
          } else if constexpr (std::is_same_v<T, tm::Id>) {
            return m_.id(tm(x.sort), tm(x.lhs), tm(x.rhs));
          } else {
            return m_.refl();
          }
        },
        t.node().v);
  }

  Val meta(const core::Meta& m) {
    if (const auto* v = m.as<core::Meta::Var>()) return env_[env_.size() - 1 - v->index];
    return m_.lift(tr::meta(m, {}));
  }

 private:
  template <class F>
  auto under(const Val& x, F&& f) {
    env_.push_back(x);
    auto r = f();
    env_.pop_back();
    return r;
  }

  M& m_;
  std::vector<Val> env_;
};

template <TosModel M>
typename M::Con fold_signature(const Signature& sig, M& m) {
  typename M::Con con = m.empty();
  for (const auto& e : sig.entries) {
    con = m.extend(con, e.name, [&](const std::vector<typename M::Val>& vals) {
      return Fold<M>(m, vals).ty(e.type);
    });
  }
  return con;
}

// ---------------------------------------------------------------------------
// The total model: algebras, displayed algebras over them, and sections.

class TotalModel {
 public:
  struct Val {
    otl::Tm a, d, s;
    bool is_id = false;
  };
  struct Ty {
    otl::Tm a;
    Family d;  // over the algebra value
    Family s;  // over the algebra and displayed values
  };
  struct Con {
    std::size_t k = 0;
    otl::Tm alg;
    Family disp;  // over g
    Family sec;   // over g, gD
  };

  Ty U() {
    return {otl::set(otl::Level::var()),
            family1([](const otl::Tm& v) { return otl::arrow(v, otl::set(otl::Level::var())); }),
            family2([](const otl::Tm& v, const otl::Tm& vd) {
              otl::FVar x = otl::fresh("x");
              return otl::pi(x, v, otl::app(vd, x));
            })};
  }

  Ty El(const Val& a) {
    return {a.a, family1([&](const otl::Tm& v) { return otl::app(a.d, v); }),
            family2([&](const otl::Tm& v, const otl::Tm& vd) {
              return a.is_id ? otl::top() : otl::eq(otl::app(a.s, v), vd);
            })};
  }

  Ty Pi(const std::string& name, const Val& dom, const std::function<Ty(const Val&)>& cod) {
    otl::FVar x = otl::fresh(tr::label(name));
    otl::FVar xd = otl::fresh(tr::label(name) + "D");
    Ty c = cod(Val{x, xd, otl::refl()});
    otl::Tm xs = otl::app(dom.s, x);
    return {otl::pi(x, dom.a, c.a), family1([&](const otl::Tm& v) {
              return otl::pi(x, dom.a,
                             otl::pi(xd, otl::app(dom.d, x), c.d.at({otl::app(v, x)})));
            }),
            family2([&](const otl::Tm& v, const otl::Tm& vd) {
              otl::Tm body = c.s.at({otl::app(v, x), otl::app(otl::app(vd, x), xs)});
              return otl::pi(x, dom.a, replace(body, xd, xs));
            })};
  }

  Ty PiExt(const std::string& name, const Val& dom, const std::function<Ty(const Val&)>& cod) {
    otl::FVar x = otl::fresh(tr::label(name));
    Ty c = cod(lift(x));
    return {otl::pi(x, dom.a, c.a), family1([&](const otl::Tm& v) {
              return otl::pi(x, dom.a, c.d.at({otl::app(v, x)}));
            }),
            family2([&](const otl::Tm& v, const otl::Tm& vd) {
              return otl::pi(x, dom.a, c.s.at({otl::app(v, x), otl::app(vd, x)}));
            })};
  }

  Val app(const Val& f, const Val& u) {
    return {otl::app(f.a, u.a), otl::app(otl::app(f.d, u.a), u.d), otl::app(f.s, u.a)};
  }

  Val app_meta(const Val& f, const Val& m) {
    return {otl::app(f.a, m.a), otl::app(f.d, m.a), otl::app(f.s, m.a)};
  }

  Val lam(const std::string& name, const Val& dom, const std::function<Val(const Val&)>& body) {
    otl::FVar x = otl::fresh(tr::label(name));
    otl::FVar xd = otl::fresh(tr::label(name) + "D");
    Val b = body(Val{x, xd, otl::refl()});
    return {otl::lam(x, dom.a, b.a), otl::lam(x, dom.a, otl::lam(xd, otl::app(dom.d, x), b.d)),
            otl::lam(x, dom.a, replace(b.s, xd, otl::app(dom.s, x)))};
  }

  Val lam_meta(const std::string& name, const Val& dom, const std::function<Val(const Val&)>& body) {
    otl::FVar x = otl::fresh(tr::label(name));
    Val b = body(lift(x));
    return {otl::lam(x, dom.a, b.a), otl::lam(x, dom.a, b.d), otl::lam(x, dom.a, b.s)};
  }

  Val pi_inf(const std::string& name, const Val& dom, const std::function<Val(const Val&)>& cod) {
    otl::FVar x = otl::fresh(tr::label(name));
    Val c = cod(lift(x));
    otl::Tm fn_ty = otl::pi(x, dom.a, c.a);
    otl::FVar h = otl::fresh("h");
    otl::FVar w = otl::fresh(tr::label(name));
    otl::Tm pred = otl::pi(w, dom.a, otl::app(replace(c.d, x, w), otl::app(h, w)));
    otl::Tm sec = otl::lam(w, dom.a, otl::app(replace(c.s, x, w), otl::app(h, w)));
    return {fn_ty, otl::lam(h, fn_ty, pred), otl::lam(h, fn_ty, sec)};
  }

  Val id(const Val& a, const Val& t, const Val& u) {
    otl::FVar e = otl::fresh("e");
    otl::Tm base = otl::eq(t.a, u.a);
    return {base, otl::lam(e, base, otl::eq(otl::transport(a.d, e, t.d), u.d)),
            otl::lam(e, base, otl::refl()), true};
  }

  Val refl() { return {otl::refl(), otl::refl(), otl::refl()}; }

  Val lift(const otl::Tm& t) { return {t, t, t}; }

  Con empty() {
    return {0, otl::top(), family1([](const otl::Tm&) { return otl::top(); }),
            family2([](const otl::Tm&, const otl::Tm&) { return otl::top(); })};
  }

  Con extend(const Con& con, const std::string&,
             const std::function<Ty(const std::vector<Val>&)>& build) {
    const std::size_t k = con.k;
    Con out;
    out.k = k + 1;
    {
      otl::FVar g = otl::fresh("g");
      std::vector<Val> vals;
      for (std::size_t m = 0; m < k; ++m) vals.push_back(lift(tr::component(g, k, m)));
      out.alg = otl::sigma(g, con.alg, build(vals).a);
    }
    out.disp = family1([&](const otl::Tm& g) {
      otl::FVar d = otl::fresh("gD");
      std::vector<Val> vals;
      for (std::size_t m = 0; m < k; ++m) {
        vals.push_back({tr::component(g, k + 1, m), tr::component(d, k, m), otl::tt()});
      }
      Ty t = build(vals);
      return otl::sigma(d, con.disp.at({otl::proj1(g)}), t.d.at({otl::proj2(g)}));
    });
    out.sec = family2([&](const otl::Tm& g, const otl::Tm& gd) {
      otl::FVar s = otl::fresh("gS");
      std::vector<Val> vals;
      for (std::size_t m = 0; m < k; ++m) {
        vals.push_back({tr::component(g, k + 1, m), tr::component(gd, k + 1, m),
                        tr::component(s, k, m)});
      }
      Ty t = build(vals);
      return otl::sigma(s, con.sec.at({otl::proj1(g), otl::proj1(gd)}),
                        t.s.at({otl::proj2(g), otl::proj2(gd)}));
    });
    return out;
  }
};

// ---------------------------------------------------------------------------
// The homomorphism model.

class MorphismModel {
 public:
  struct Val {
    otl::Tm a0, a1, m;
    bool is_id = false;
  };
  struct Ty {
    otl::Tm a;  // algebra type on the source side
    Family m;   // over source and target values
  };
  struct Con {
    std::size_t k = 0;
    otl::Tm alg;
    Family mor;  // over g0, g1
  };

  Ty U() {
    return {otl::set(otl::Level::var()),
            family2([](const otl::Tm& v0, const otl::Tm& v1) { return otl::arrow(v0, v1); })};
  }

  Ty El(const Val& a) {
    return {a.a0, family2([&](const otl::Tm& v0, const otl::Tm& v1) {
              return a.is_id ? otl::top() : otl::eq(otl::app(a.m, v0), v1);
            })};
  }

  Ty Pi(const std::string& name, const Val& dom, const std::function<Ty(const Val&)>& cod) {
    otl::FVar x = otl::fresh(tr::label(name));
    otl::Tm x1 = otl::app(dom.m, x);
    Ty c = cod(Val{x, x1, otl::refl()});
    return {otl::pi(x, dom.a0, c.a), family2([&](const otl::Tm& v0, const otl::Tm& v1) {
              return otl::pi(x, dom.a0, c.m.at({otl::app(v0, x), otl::app(v1, x1)}));
            })};
  }

  Ty PiExt(const std::string& name, const Val& dom, const std::function<Ty(const Val&)>& cod) {
    otl::FVar x = otl::fresh(tr::label(name));
    Ty c = cod(lift(x));
    return {otl::pi(x, dom.a0, c.a), family2([&](const otl::Tm& v0, const otl::Tm& v1) {
              return otl::pi(x, dom.a0, c.m.at({otl::app(v0, x), otl::app(v1, x)}));
            })};
  }

  Val app(const Val& f, const Val& u) {
    return {otl::app(f.a0, u.a0), otl::app(f.a1, u.a1), otl::app(f.m, u.a0)};
  }

  Val app_meta(const Val& f, const Val& m) {
    return {otl::app(f.a0, m.a0), otl::app(f.a1, m.a0), otl::app(f.m, m.a0)};
  }

  Val lam(const std::string& name, const Val& dom, const std::function<Val(const Val&)>& body) {
    otl::FVar x = otl::fresh(tr::label(name));
    otl::FVar y = otl::fresh(tr::label(name));
    Val b = body(Val{x, y, otl::refl()});
    return {otl::lam(x, dom.a0, b.a0), otl::lam(y, dom.a1, b.a1),
            otl::lam(x, dom.a0, replace(b.m, y, otl::app(dom.m, x)))};
  }

  Val lam_meta(const std::string& name, const Val& dom, const std::function<Val(const Val&)>& body) {
    otl::FVar x = otl::fresh(tr::label(name));
    Val b = body(lift(x));
    return {otl::lam(x, dom.a0, b.a0), otl::lam(x, dom.a0, b.a1), otl::lam(x, dom.a0, b.m)};
  }

  Val pi_inf(const std::string& name, const Val& dom, const std::function<Val(const Val&)>& cod) {
    otl::FVar x = otl::fresh(tr::label(name));
    Val c = cod(lift(x));
    otl::Tm fn0 = otl::pi(x, dom.a0, c.a0);
    otl::FVar h = otl::fresh("h");
    otl::FVar w = otl::fresh(tr::label(name));
    otl::Tm mor = otl::lam(h, fn0, otl::lam(w, dom.a0, otl::app(replace(c.m, x, w), otl::app(h, w))));
    return {fn0, otl::pi(x, dom.a0, c.a1), mor};
  }

  Val id(const Val&, const Val& t, const Val& u) {
    otl::FVar e = otl::fresh("e");
    otl::Tm base = otl::eq(t.a0, u.a0);
    return {base, otl::eq(t.a1, u.a1), otl::lam(e, base, otl::refl()), true};
  }

  Val refl() { return {otl::refl(), otl::refl(), otl::refl()}; }

  Val lift(const otl::Tm& t) { return {t, t, t}; }

  Con empty() {
    return {0, otl::top(), family2([](const otl::Tm&, const otl::Tm&) { return otl::top(); })};
  }

  Con extend(const Con& con, const std::string&,
             const std::function<Ty(const std::vector<Val>&)>& build) {
    const std::size_t k = con.k;
    Con out;
    out.k = k + 1;
    {
      otl::FVar g = otl::fresh("g");
      std::vector<Val> vals;
      for (std::size_t m = 0; m < k; ++m) vals.push_back(lift(tr::component(g, k, m)));
      out.alg = otl::sigma(g, con.alg, build(vals).a);
    }
    out.mor = family2([&](const otl::Tm& g0, const otl::Tm& g1) {
      otl::FVar h = otl::fresh("gM");
      std::vector<Val> vals;
      for (std::size_t m = 0; m < k; ++m) {
        vals.push_back({tr::component(g0, k + 1, m), tr::component(g1, k + 1, m),
                        tr::component(h, k, m)});
      }
      Ty t = build(vals);
      return otl::sigma(h, con.mor.at({otl::proj1(g0), otl::proj1(g1)}),
                        t.m.at({otl::proj2(g0), otl::proj2(g1)}));
    });
    return out;
  }
};

static_assert(TosModel<TotalModel>);
static_assert(TosModel<MorphismModel>);

}  // namespace qiit::model

namespace qiit {

/// The same translations computed by folding the signature through a model.
inline Translation translate_via_model(const Signature& sig, What what) {
  otl::Tm out;
  if (what == What::kMorphism) {
    model::MorphismModel m;
    auto con = model::fold_signature(sig, m);
    otl::FVar g0 = otl::fresh("g0");
    otl::FVar g1 = otl::fresh("g1");
    out = otl::lam(g0, con.alg, otl::lam(g1, con.alg, con.mor.at({g0, g1})));
  } else {
    model::TotalModel m;
    auto con = model::fold_signature(sig, m);
    otl::FVar g = otl::fresh("g");
    otl::FVar gd = otl::fresh("gD");
    switch (what) {
      case What::kAlgebra:
        out = con.alg;
        break;
      case What::kDisplayed:
        out = otl::lam(g, con.alg, con.disp.at({g}));
        break;
      case What::kSection:
        out = otl::lam(g, con.alg, otl::lam(gd, con.disp.at({g}), con.sec.at({g, gd})));
        break;
      default:
        out = otl::lam(g, con.alg, otl::pi(gd, con.disp.at({g}), con.sec.at({g, gd})));
        break;
    }
  }
  return {what, otl::beta(out), tr::externals(sig), sig.name, tr::entry_names(sig)};
}

}  // namespace qiit
