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

// Bidirectional elaboration of resolved raw signatures into checked core
// telescopes.
//
// Surface arrows are classified by their domain: a sort gives Π, an external
// type gives Π^ext in type position and Π^inf in term position.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <fmt/core.h>

#include "qiit/core.hpp"
#include "qiit/error.hpp"
#include "qiit/signature.hpp"
#include "qiit/surface.hpp"

namespace qiit {

class Elaborator {
 public:
  using RawExpr = surface::RawExpr;
  using RawKind = surface::RawKind;

  explicit Elaborator(std::uint32_t level_j) { sig_.level_j = level_j; }

  Signature run(const surface::RawSignature& raw) {
    sig_.name = raw.name;
    sig_.level_j = raw.level;
    for (const auto& x : raw.externals) {
      External ext{x.name, std::nullopt, x.span};
      if (x.type) ext.type = meta_type(*x.type);
      sig_.externals.push_back(std::move(ext));
    }
    for (const auto& e : raw.entries) add_entry(e.name, e.type, e.span);
    return sig_;
  }

  /// Checks one more entry against the entries so far.
  void add_entry(const std::string& name, const RawExpr& type, SourceSpan span) {
    ctx_ = sig_.context(sig_.entries.size());
    core::Ty t = check_ty(type);
    t = core::normalize(t);
    sig_.entries.push_back({name, t, span});
  }

  const Signature& signature() const { return sig_; }
  core::Context& context() { return ctx_; }

  core::Ty check_ty(const RawExpr& r) {
    using namespace core;
    switch (r.kind) {
      case RawKind::kU:
        return universe();
      case RawKind::kEl:
        return el(check_tm(r.args[0], universe()));
      case RawKind::kArrow: {
        const RawExpr& d = r.args[0];
        if (is_meta_domain(d)) {
          if (r.marker == surface::Marker::kInf) {
            throw Error(ErrorKind::kTypeMismatch,
                        "an infinitary arrow is a sort; use El to turn it into a type", r.span);
          }
          Meta m = domain_meta_type(d);
          ScopedBinding b(ctx_, {r.name, m});
          return pi_ext(r.name, m, check_ty(r.args[1]));
        }
        if (r.marker != surface::Marker::kNone) {
          throw Error(ErrorKind::kObjectWhereMetaExpected,
                      fmt::format("domain of a marked arrow must be an external type, found {}",
                                  describe(d)),
                      d.span);
        }
        Tm dom = sort_domain(d);
        ScopedBinding b(ctx_, {r.name, el(dom)});
        return pi(r.name, dom, check_ty(r.args[1]));
      }
      default:
        throw Error(ErrorKind::kNotASort,
                    fmt::format("expected a type (U, El _, or an arrow), found {}", describe(r)),
                    r.span);
    }
  }

  core::Tm check_tm(const RawExpr& r, const core::Ty& expected) {
    using namespace core;
    Ty want = normalize(ctx_, expected);
    switch (r.kind) {
      case RawKind::kLam: {
        if (const auto* p = want.as<ty::Pi>()) {
          ScopedBinding b(ctx_, {r.name, el(p->dom)});
          return lam(r.name, p->dom, check_tm(r.args[0], p->cod));
        }
        if (const auto* p = want.as<ty::PiExt>()) {
          ScopedBinding b(ctx_, {r.name, p->dom});
          return lam_ext(r.name, p->dom, check_tm(r.args[0], p->cod));
        }
        if (const auto* e = want.as<ty::El>()) {
          if (const auto* p = e->code.as<tm::PiInf>()) {
            ScopedBinding b(ctx_, {r.name, p->dom});
            return lam_inf(r.name, p->dom, check_tm(r.args[0], el(p->cod)));
          }
        }
        throw mismatch(r, "a lambda", want);
      }
      case RawKind::kProof: {
        const tm::Id* eq = id_of(want);
        if (!eq) throw mismatch(r, "an equality proof", want);
        if (!conv(ctx_, eq->lhs, eq->rhs)) {
          throw Error(ErrorKind::kTypeMismatch,
                      fmt::format("'proof' needs {} and {} to be convertible", show(eq->lhs),
                                  show(eq->rhs)),
                      r.span);
        }
        return proof();
      }
      case RawKind::kRefl: {
        const tm::Id* eq = id_of(want);
        if (!eq) throw mismatch(r, "Refl", want);
        Tm t = check_tm(r.args[0], el(eq->sort));
        if (!conv(ctx_, t, eq->lhs) || !conv(ctx_, t, eq->rhs)) {
          throw Error(ErrorKind::kTypeMismatch,
                      fmt::format("type mismatch: Refl {} has type El (Id {} {} {}), expected {}",
                                  show(t), show(eq->sort), show(t), show(t), show(want)),
                      r.span);
        }
        return refl(t);
      }
      case RawKind::kArrow: {
        if (!want.is<ty::U>()) throw mismatch(r, "an arrow", want);
        const RawExpr& d = r.args[0];
        if (r.marker == surface::Marker::kExt) {
          throw Error(ErrorKind::kTypeMismatch,
                      "an external arrow is a type, not a sort; it cannot appear under El",
                      r.span);
        }
        if (!is_meta_domain(d)) {
          throw Error(ErrorKind::kObjectWhereMetaExpected,
                      fmt::format("an arrow used as a sort needs an external domain, found {}",
                                  describe(d)),
                      d.span);
        }
        Meta m = domain_meta_type(d);
        ScopedBinding b(ctx_, {r.name, m});
        return pi_inf(r.name, m, check_tm(r.args[1], universe()));
      }
      default: {
        auto [t, ty] = infer_tm(r);
        if (!conv(ctx_, ty, want)) {
          throw Error(ErrorKind::kTypeMismatch,
                      fmt::format("type mismatch: {} has type {}, expected {}", show(t),
                                  show(ty), show(want)),
                      r.span);
        }
        return t;
      }
    }
  }

  std::pair<core::Tm, core::Ty> infer_tm(const RawExpr& r) {
    using namespace core;
    switch (r.kind) {
      case RawKind::kName: {
        if (r.ref == surface::NameRef::kEntry || r.ref == surface::NameRef::kLocal) {
          std::uint32_t i = index_of(r);
          if (auto t = ctx_.object_type(i)) return {var(i), *t};
        }
        throw Error(ErrorKind::kMetaWhereObjectExpected,
                    fmt::format("'{}' is external, but a term is expected here", r.name),
                    r.span);
      }
      case RawKind::kApp:
      case RawKind::kMetaApp: {
        auto [f, fty] = infer_tm(r.args[0]);
        Ty ft = normalize(ctx_, fty);
        const RawExpr& a = r.args[1];
        if (const auto* p = ft.as<ty::Pi>()) {
          if (r.kind == RawKind::kMetaApp) {
            throw Error(ErrorKind::kMetaWhereObjectExpected,
                        fmt::format("{} takes a term argument, not an external [..] argument",
                                    show(f)),
                        a.span);
          }
          Tm arg = check_tm(a, el(p->dom));
          return {app(f, arg), subst(p->cod, Substitution::single(arg))};
        }
        if (const auto* p = ft.as<ty::PiExt>()) {
          Meta arg = meta_expr(a, p->dom);
          return {app_ext(f, arg), subst(p->cod, Substitution::single(arg))};
        }
        if (const auto* e = ft.as<ty::El>()) {
          if (const auto* p = e->code.as<tm::PiInf>()) {
            Meta arg = meta_expr(a, p->dom);
            return {app_inf(f, arg), el(subst(p->cod, Substitution::single(arg)))};
          }
        }
        throw Error(ErrorKind::kTypeMismatch,
                    fmt::format("{} has type {} and cannot be applied", show(f), show(ft)),
                    r.args[0].span);
      }
      case RawKind::kId: {
        Tm a = check_tm(r.args[0], universe());
        Tm lhs = id_side(r.args[1], a);
        Tm rhs = id_side(r.args[2], a);
        return {id(a, lhs, rhs), universe()};
      }
      case RawKind::kRefl: {
        auto [t, ty] = infer_tm(r.args[0]);
        Ty n = normalize(ctx_, ty);
        const auto* e = n.as<ty::El>();
        if (!e) {
          throw Error(ErrorKind::kTypeMismatch,
                      fmt::format("Refl needs an element of a sort, found {} : {}", show(t),
                                  show(n)),
                      r.span);
        }
        return {refl(t), el(id(e->code, t, t))};
      }
      case RawKind::kArrow:
        return {check_tm(r, universe()), universe()};
      case RawKind::kLam:
      case RawKind::kProof:
        throw Error(ErrorKind::kTypeMismatch,
                    fmt::format("cannot infer the type of {}; use it where a type is known",
                                describe(r)),
                    r.span);
      case RawKind::kU:
      case RawKind::kEl:
        throw Error(ErrorKind::kTypeMismatch,
                    fmt::format("{} is a type, but a term is expected here", describe(r)),
                    r.span);
      default:
        throw Error(ErrorKind::kMetaWhereObjectExpected,
                    fmt::format("{} is external, but a term is expected here", describe(r)),
                    r.span);
    }
  }

  /// The universe level of a meta type, or nothing when `m` is not a type.
  std::optional<std::uint32_t> meta_type_level(const core::Meta& m) const {
    using core::Meta;
    if (m.is<Meta::Declared>()) return sig_.level_j;
    if (m.is<Meta::Bool>() || m.is<Meta::Fin>()) return 0u;
    if (const auto* u = m.as<Meta::Universe>()) return u->level + 1;
    if (const auto* v = m.as<Meta::Var>()) {
      auto t = ctx_.meta_type(v->index);
      if (t) {
        if (const auto* u = t->as<Meta::Universe>()) return u->level;
      }
    }
    return std::nullopt;
  }

 private:
  std::uint32_t index_of(const RawExpr& r) const {
    return static_cast<std::uint32_t>(ctx_.size() - 1 - r.level);
  }

  static std::string describe(const RawExpr& r) {
    switch (r.kind) {
      case RawKind::kName: return fmt::format("'{}'", r.name);
      case RawKind::kU: return "U";
      case RawKind::kEl: return "an El type";
      case RawKind::kArrow: return "an arrow";
      case RawKind::kLam: return "a lambda";
      case RawKind::kApp: case RawKind::kMetaApp: return "an application";
      case RawKind::kId: return "an Id sort";
      case RawKind::kRefl: return "a Refl proof";
      case RawKind::kProof: return "'proof'";
      case RawKind::kBool: return "Bool";
      case RawKind::kFin: return fmt::format("Fin {}", r.number);
      case RawKind::kSet: return fmt::format("Set {}", r.number);
      case RawKind::kTrue: return "true";
      case RawKind::kFalse: return "false";
      case RawKind::kNat: return fmt::format("the literal {}", r.number);
    }
    return "an expression";
  }

  std::string show(const core::Tm& t) { return printer().tm(t); }
  std::string show(const core::Ty& t) { return printer().ty(t); }

  surface::Printer printer() const {
    surface::Printer p(surface::global_names(sig_));
    for (const auto& b : ctx_.bindings()) p.push(b.name.empty() ? "_" : b.name);
    return p;
  }

  Error mismatch(const RawExpr& r, std::string_view what, const core::Ty& want) {
    return Error(ErrorKind::kTypeMismatch,
                 fmt::format("type mismatch: {} cannot have type {}", what, show(want)), r.span);
  }

  static const core::tm::Id* id_of(const core::Ty& t) {
    if (const auto* e = t.as<core::ty::El>()) return e->code.as<core::tm::Id>();
    return nullptr;
  }

  core::Tm id_side(const RawExpr& r, const core::Tm& sort) {
    using namespace core;
    if (r.kind == RawKind::kLam || r.kind == RawKind::kProof || r.kind == RawKind::kRefl) {
      return check_tm(r, el(sort));
    }
    auto [t, ty] = infer_tm(r);
    if (!conv(ctx_, ty, el(sort))) {
      throw Error(ErrorKind::kIdArgumentsDifferentSorts,
                  fmt::format("Id compares elements of {}, but {} has type {}", show(sort),
                              show(t), show(ty)),
                  r.span);
    }
    return t;
  }

  /// Domain of an inductive Π: a term of U.
  core::Tm sort_domain(const RawExpr& d) {
    using namespace core;
    if (d.kind == RawKind::kArrow) return check_tm(d, universe());
    if (d.kind == RawKind::kLam || d.kind == RawKind::kProof) {
      throw Error(ErrorKind::kNotASort,
                  fmt::format("domain {} is not a sort", describe(d)), d.span);
    }
    auto [t, ty] = infer_tm(d);
    if (!conv(ctx_, ty, universe())) {
      throw Error(ErrorKind::kNotASort,
                  fmt::format("domain {} has type {}, not U", show(t), show(ty)), d.span);
    }
    return t;
  }

  bool is_meta_domain(const RawExpr& d) const {
    switch (d.kind) {
      case RawKind::kBool: case RawKind::kFin: case RawKind::kSet:
        return true;
      case RawKind::kName:
        if (d.ref == surface::NameRef::kExternalSet || d.ref == surface::NameRef::kExternalConst) {
          return true;
        }
        if (d.ref == surface::NameRef::kLocal) return !ctx_.at(index_of(d)).is_object();
        return false;
      default:
        return false;
    }
  }

  core::Meta domain_meta_type(const RawExpr& d) {
    core::Meta m = meta_type(d);
    std::uint32_t lvl = *meta_type_level(m);
    if (lvl > sig_.level_j) {
      throw Error(ErrorKind::kTypeMismatch,
                  fmt::format("{} lives in Set {}, above the signature level {}", describe(d),
                              lvl, sig_.level_j),
                  d.span);
    }
    return m;
  }

  /// An expression denoting an external type.
  core::Meta meta_type(const RawExpr& r) {
    using namespace core;
    switch (r.kind) {
      case RawKind::kBool: return meta_bool();
      case RawKind::kFin: return meta_fin(r.number);
      case RawKind::kSet: return meta_universe(r.number);
      case RawKind::kName: {
        if (r.ref == surface::NameRef::kExternalSet) return meta_declared(r.name);
        if (r.ref == surface::NameRef::kLocal && !ctx_.at(index_of(r)).is_object()) {
          Meta v = meta_var(index_of(r));
          if (meta_type_level(v)) return v;
        }
        if (r.ref == surface::NameRef::kExternalConst || r.ref == surface::NameRef::kLocal) {
          if (r.ref == surface::NameRef::kExternalConst ||
              !ctx_.at(index_of(r)).is_object()) {
            throw Error(ErrorKind::kTypeMismatch,
                        fmt::format("'{}' is an external value, not an external type", r.name),
                        r.span);
          }
        }
        [[fallthrough]];
      }
      default:
        throw Error(ErrorKind::kObjectWhereMetaExpected,
                    fmt::format("expected an external type, found {}", describe(r)), r.span);
    }
  }

  core::Meta meta_type_of(const core::Meta& value) const {
    using core::Meta;
    if (const auto* v = value.as<Meta::Var>()) return *ctx_.meta_type(v->index);
    if (const auto* c = value.as<Meta::Const>()) return *sig_.find_external(c->name)->type;
    if (value.is<Meta::BoolLit>()) return core::meta_bool();
    if (const auto* f = value.as<Meta::FinLit>()) return core::meta_fin(f->size);
    return core::meta_universe(*meta_type_level(value));
  }

  static bool meta_fits(const core::Meta& actual, const core::Meta& expected) {
    using core::Meta;
    if (actual == expected) return true;
    const auto* a = actual.as<Meta::Universe>();
    const auto* e = expected.as<Meta::Universe>();
    return a && e && a->level <= e->level;
  }

  /// An external value of the given external type.
  core::Meta meta_expr(const RawExpr& r, const core::Meta& expected) {
    using namespace core;
    Meta value = meta_bool();
    switch (r.kind) {
      case RawKind::kName:
        if (r.ref == surface::NameRef::kExternalSet) {
          value = meta_declared(r.name);
        } else if (r.ref == surface::NameRef::kExternalConst) {
          value = meta_const(r.name);
        } else if (r.ref == surface::NameRef::kLocal && !ctx_.at(index_of(r)).is_object()) {
          value = meta_var(index_of(r));
        } else {
          throw Error(ErrorKind::kObjectWhereMetaExpected,
                      fmt::format("'{}' is a term, but an external value is expected", r.name),
                      r.span);
        }
        break;
      case RawKind::kTrue: value = meta_bool_lit(true); break;
      case RawKind::kFalse: value = meta_bool_lit(false); break;
      case RawKind::kNat: {
        const auto* f = expected.as<Meta::Fin>();
        if (!f || r.number >= f->size) {
          throw Error(ErrorKind::kTypeMismatch,
                      fmt::format("the literal {} does not belong to {}", r.number,
                                  printer().meta(expected)),
                      r.span);
        }
        return meta_fin_lit(r.number, f->size);
      }
      case RawKind::kBool: case RawKind::kFin: case RawKind::kSet:
        value = meta_type(r);
        break;
      default:
        throw Error(ErrorKind::kObjectWhereMetaExpected,
                    fmt::format("expected an external value, found {}", describe(r)), r.span);
    }
    Meta actual = meta_type_of(value);
    if (!meta_fits(actual, expected)) {
      throw Error(ErrorKind::kTypeMismatch,
                  fmt::format("type mismatch: {} has external type {}, expected {}",
                              printer().meta(value), printer().meta(actual),
                              printer().meta(expected)),
                  r.span);
    }
    return value;
  }

  Signature sig_;
  core::Context ctx_;
};

/// parse → resolve → check.
inline Signature check_signature(const surface::RawSignature& raw) {
  return Elaborator(raw.level).run(surface::resolve(raw));
}

inline Signature elaborate(std::string_view text) {
  return check_signature(surface::parse(text));
}

}  // namespace qiit
