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

// Term algebras of plain signatures and finite concrete algebras.
//
// A plain signature has no Id, no infinitary arguments, and external
// arguments only over Bool and Fin n. Its closed constructor trees are
// enumerated up to a depth bound; folding them into a finite algebra and
// comparing against candidate homomorphisms probes initiality.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "qiit/core.hpp"
#include "qiit/error.hpp"
#include "qiit/signature.hpp"

namespace qiit::termmodel {

using Token = std::string;

// ---------------------------------------------------------------------------
// Plainness.

struct Binder {
  std::string name;
  bool meta = false;
  std::uint32_t meta_size = 0;  // number of literals of a Bool or Fin n binder
  bool meta_bool = false;
  core::Tm code = core::var(0);  // object binders: code of the domain sort
};

/// An entry type as a telescope of binders ending in U or El code.
struct Telescope {
  std::vector<Binder> binders;
  bool is_sort = false;
  core::Tm result = core::var(0);
};

inline std::optional<std::string> plain_violation(const core::Tm& t) {
  using namespace core;
  if (t.is<tm::Id>() || t.is<tm::Refl>() || t.is<tm::Proof>()) return "Id";
  if (t.is<tm::PiInf>() || t.is<tm::AppInf>() || t.is<tm::LamInf>()) return "Π^inf";
  if (t.is<tm::Lam>() || t.is<tm::LamExt>()) return "a function argument";
  if (const auto* a = t.as<tm::App>()) {
    if (auto r = plain_violation(a->fn)) return r;
    return plain_violation(a->arg);
  }
  if (const auto* a = t.as<tm::AppExt>()) return plain_violation(a->fn);
  return std::nullopt;
}

inline std::optional<std::string> plain_violation(const core::Ty& t) {
  using namespace core;
  if (t.is<ty::U>()) return std::nullopt;
  if (const auto* e = t.as<ty::El>()) return plain_violation(e->code);
  if (const auto* p = t.as<ty::Pi>()) {
    if (auto r = plain_violation(p->dom)) return r;
    return plain_violation(p->cod);
  }
  const auto* p = t.as<ty::PiExt>();
  if (!p->dom.is<Meta::Bool>() && !p->dom.is<Meta::Fin>()) return "Π^ext over a non-finite set";
  return plain_violation(p->cod);
}

/// Empty if the signature is plain, otherwise the reason.
inline std::optional<std::string> is_plain(const Signature& sig) {
  for (const auto& e : sig.entries) {
    if (auto r = plain_violation(e.type)) return fmt::format("{} at entry {}", *r, e.name);
  }
  return std::nullopt;
}

inline Telescope telescope(const core::Ty& ty) {
  using namespace core;
  Telescope tel;
  Ty t = ty;
  while (true) {
    if (const auto* p = t.as<ty::Pi>()) {
      tel.binders.push_back({p->name, false, 0, false, p->dom});
      t = p->cod;
    } else if (const auto* p = t.as<ty::PiExt>()) {
      Binder b{p->name, true, 2, true, core::var(0)};
      if (const auto* f = p->dom.as<Meta::Fin>()) b = {p->name, true, f->size, false, core::var(0)};
      tel.binders.push_back(b);
      t = p->cod;
    } else if (t.is<ty::U>()) {
      tel.is_sort = true;
      return tel;
    } else {
      tel.result = t.as<ty::El>()->code;
      return tel;
    }
  }
}

inline Token literal_token(const Binder& b, std::uint32_t k) {
  if (b.meta_bool) return k ? "true" : "false";
  return fmt::format("{}", k);
}

// ---------------------------------------------------------------------------
// Evaluation of codes and terms of a telescope under an environment.

struct Lit {
  Token text;
};

template <class V>
using Value = std::variant<Lit, V>;

/// Head entry applied to evaluated arguments.
template <class V>
struct Spine {
  std::size_t entry;
  std::vector<Value<V>> args;
};

/// Evaluates a term inside entry `owner`'s type with `env` holding the
/// local binders (front is the outermost). `construct` interprets a
/// constructor spine.
template <class V, class Construct>
Value<V> eval_value(const core::Tm& t, std::size_t owner, const std::vector<Value<V>>& env,
                    Construct&& construct);

template <class V, class Construct>
Spine<V> eval_spine(const core::Tm& t, std::size_t owner, const std::vector<Value<V>>& env,
                    Construct&& construct) {
  using namespace core;
  std::vector<Value<V>> args;
  Tm h = t;
  std::vector<Value<V>> rev;
  while (true) {
    if (const auto* a = h.as<tm::App>()) {
      rev.push_back(eval_value<V>(a->arg, owner, env, construct));
      h = a->fn;
    } else if (const auto* a = h.as<tm::AppExt>()) {
      if (const auto* v = a->arg.as<Meta::Var>()) {
        rev.push_back(env[env.size() - 1 - v->index]);
      } else if (const auto* b = a->arg.as<Meta::BoolLit>()) {
        rev.push_back(Lit{b->value ? "true" : "false"});
      } else if (const auto* f = a->arg.as<Meta::FinLit>()) {
        rev.push_back(Lit{fmt::format("{}", f->value)});
      } else {
        throw Error(ErrorKind::kNotPlain, "external argument is not a literal or variable");
      }
      h = a->fn;
    } else {
      break;
    }
  }
  const auto* v = h.as<tm::Var>();
  if (!v || v->index < env.size()) throw Error(ErrorKind::kNotPlain, "application of a local variable");
  std::size_t entry = owner - 1 - (v->index - env.size());
  args.assign(rev.rbegin(), rev.rend());
  return {entry, std::move(args)};
}

template <class V, class Construct>
Value<V> eval_value(const core::Tm& t, std::size_t owner, const std::vector<Value<V>>& env,
                    Construct&& construct) {
  if (const auto* v = t.as<core::tm::Var>(); v && v->index < env.size()) {
    return env[env.size() - 1 - v->index];
  }
  return Value<V>(construct(eval_spine<V>(t, owner, env, construct)));
}

// ---------------------------------------------------------------------------
// Free terms.

struct FreeTerm;
using FreeTermPtr = std::shared_ptr<const FreeTerm>;

/// A sort entry applied to index values, printed as text.
struct SortExpr {
  std::size_t entry = 0;
  std::vector<Token> index;
  std::string text;

  friend bool operator<(const SortExpr& a, const SortExpr& b) {
    return std::tie(a.entry, a.index) < std::tie(b.entry, b.index);
  }
  friend bool operator==(const SortExpr& a, const SortExpr& b) {
    return a.entry == b.entry && a.index == b.index;
  }
};

struct FreeTerm {
  std::string head;
  std::size_t entry = 0;
  std::vector<Token> meta_args;
  std::vector<FreeTermPtr> object_args;
  std::vector<Value<FreeTermPtr>> args;  // all arguments in binder order
  SortExpr sort;
  std::uint32_t depth = 1;
  std::string text;
};

inline std::string token_of(const Value<FreeTermPtr>& v) {
  if (const auto* l = std::get_if<Lit>(&v)) return l->text;
  return std::get<FreeTermPtr>(v)->text;
}

inline std::string applied_text(const std::string& head, const std::vector<std::string>& args,
                                const std::vector<bool>& compound) {
  std::string s = head;
  for (std::size_t k = 0; k < args.size(); ++k) s += compound[k] ? " (" + args[k] + ")" : " " + args[k];
  return s;
}

inline SortExpr make_sort(const Signature& sig, std::size_t entry, const std::vector<Value<FreeTermPtr>>& args) {
  SortExpr s{entry, {}, {}};
  std::vector<bool> compound;
  for (const auto& a : args) {
    s.index.push_back(token_of(a));
    const auto* t = std::get_if<FreeTermPtr>(&a);
    compound.push_back(t && !(*t)->args.empty());
  }
  s.text = applied_text(sig.entries[entry].name, s.index, compound);
  return s;
}

class Enumerator {
 public:
  explicit Enumerator(const Signature& sig) : sig_(sig) {
    if (auto r = is_plain(sig)) throw Error(ErrorKind::kNotPlain, "not plain: " + *r);
    for (const auto& e : sig.entries) tels_.push_back(telescope(e.type));
  }

  using Pool = std::map<SortExpr, std::vector<FreeTermPtr>>;

  /// All well-typed constructor trees of depth ≤ depth, grouped by sort.
  /// Every sort instance whose index values are available appears, possibly
  /// with no terms.
  Pool enumerate(std::uint32_t depth) {
    Pool pool;
    for (std::uint32_t d = 1; d <= depth; ++d) pool = step(pool);
    Pool out;
    for (std::size_t e = 0; e < sig_.entries.size(); ++e) {
      if (!tels_[e].is_sort) continue;
      for_each_tuple(e, pool, [&](const std::vector<Value<FreeTermPtr>>& args) {
        SortExpr s = make_sort(sig_, e, args);
        auto it = pool.find(s);
        out[s] = it == pool.end() ? std::vector<FreeTermPtr>{} : it->second;
      });
    }
    return out;
  }

  const std::vector<Telescope>& telescopes() const { return tels_; }

 private:
  FreeTermPtr build(std::size_t entry, const std::vector<Value<FreeTermPtr>>& args) const {
    auto t = std::make_shared<FreeTerm>();
    t->head = sig_.entries[entry].name;
    t->entry = entry;
    t->args = args;
    std::vector<std::string> texts;
    std::vector<bool> compound;
    for (const auto& a : args) {
      if (const auto* l = std::get_if<Lit>(&a)) {
        t->meta_args.push_back(l->text);
        texts.push_back(l->text);
        compound.push_back(false);
      } else {
        const auto& f = std::get<FreeTermPtr>(a);
        t->object_args.push_back(f);
        t->depth = std::max(t->depth, f->depth + 1);
        texts.push_back(f->text);
        compound.push_back(!f->args.empty());
      }
    }
    t->text = applied_text(t->head, texts, compound);
    Spine<FreeTermPtr> s = eval_spine<FreeTermPtr>(tels_[entry].result, entry, args, constructor());
    t->sort = make_sort(sig_, s.entry, s.args);
    return t;
  }

  std::function<FreeTermPtr(const Spine<FreeTermPtr>&)> constructor() const {
    return [this](const Spine<FreeTermPtr>& s) { return build(s.entry, s.args); };
  }

  template <class F>
  void for_each_tuple(std::size_t entry, const Pool& pool, F&& f) const {
    std::vector<Value<FreeTermPtr>> env;
    tuples(entry, 0, pool, env, f);
  }

  template <class F>
  void tuples(std::size_t entry, std::size_t k, const Pool& pool, std::vector<Value<FreeTermPtr>>& env,
              F& f) const {
    const Telescope& tel = tels_[entry];
    if (k == tel.binders.size()) {
      f(env);
      return;
    }
    const Binder& b = tel.binders[k];
    if (b.meta) {
      for (std::uint32_t v = 0; v < b.meta_size; ++v) {
        env.push_back(Lit{literal_token(b, v)});
        tuples(entry, k + 1, pool, env, f);
        env.pop_back();
      }
      return;
    }
    Spine<FreeTermPtr> s = eval_spine<FreeTermPtr>(b.code, entry, env, constructor());
    auto it = pool.find(make_sort(sig_, s.entry, s.args));
    if (it == pool.end()) return;
    for (const auto& t : it->second) {
      env.push_back(t);
      tuples(entry, k + 1, pool, env, f);
      env.pop_back();
    }
  }

  Pool step(const Pool& prev) const {
    Pool next;
    for (std::size_t e = 0; e < sig_.entries.size(); ++e) {
      if (tels_[e].is_sort) continue;
      for_each_tuple(e, prev, [&](const std::vector<Value<FreeTermPtr>>& args) {
        FreeTermPtr t = build(e, args);
        next[t->sort].push_back(t);
      });
    }
    return next;
  }

  const Signature& sig_;
  std::vector<Telescope> tels_;
};

inline Enumerator::Pool enumerate(const Signature& sig, std::uint32_t depth) {
  return Enumerator(sig).enumerate(depth);
}

// ---------------------------------------------------------------------------
// Concrete algebras.

struct ConcreteAlgebra {
  /// sort name → index tuple → carrier ({} for unindexed sorts)
  std::map<std::string, std::map<std::vector<Token>, std::vector<Token>>> carriers;
  /// constructor name → argument tuple → result
  std::map<std::string, std::map<std::vector<Token>, Token>> ops;
};

inline std::vector<Token> tokens(const nlohmann::json& j) {
  std::vector<Token> out;
  for (const auto& x : j) {
    if (x.is_string()) {
      out.push_back(x.get<std::string>());
    } else if (x.is_boolean()) {
      out.push_back(x.get<bool>() ? "true" : "false");
    } else {
      out.push_back(x.dump());
    }
  }
  return out;
}

inline ConcreteAlgebra algebra_from_json(const nlohmann::json& j) {
  ConcreteAlgebra a;
  try {
    for (const auto& [sort, c] : j.at("carriers").items()) {
      auto& slot = a.carriers[sort];
      if (c.is_array() && (c.empty() || !c.front().is_object())) {
        slot[{}] = tokens(c);
      } else {
        for (const auto& x : c) slot[tokens(x.at("index"))] = tokens(x.at("carrier"));
      }
    }
    for (const auto& [op, rows] : j.at("ops").items()) {
      auto& table = a.ops[op];
      for (const auto& r : rows) table[tokens(r.at("args"))] = tokens(nlohmann::json::array({r.at("result")}))[0];
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kBadInput, fmt::format("malformed algebra: {}", e.what()));
  }
  return a;
}

inline nlohmann::ordered_json algebra_to_json(const ConcreteAlgebra& a) {
  nlohmann::ordered_json j;
  j["carriers"] = nlohmann::ordered_json::object();
  for (const auto& [sort, by_index] : a.carriers) {
    if (by_index.size() == 1 && by_index.begin()->first.empty()) {
      j["carriers"][sort] = by_index.begin()->second;
    } else {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& [idx, c] : by_index) arr.push_back({{"index", idx}, {"carrier", c}});
      j["carriers"][sort] = arr;
    }
  }
  j["ops"] = nlohmann::ordered_json::object();
  for (const auto& [op, table] : a.ops) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [args, r] : table) arr.push_back({{"args", args}, {"result", r}});
    j["ops"][op] = arr;
  }
  return j;
}

inline std::string join(const std::vector<Token>& ts) {
  std::string s = "(";
  for (std::size_t k = 0; k < ts.size(); ++k) s += (k ? ", " : "") + ts[k];
  return s + ")";
}

inline std::vector<Token> texts(const std::vector<Value<Token>>& args) {
  std::vector<Token> out;
  for (const auto& a : args) out.push_back(std::holds_alternative<Lit>(a) ? std::get<Lit>(a).text : std::get<Token>(a));
  return out;
}

/// Interpretation of a plain signature in a concrete algebra.
class Interpretation {
 public:
  Interpretation(const Signature& sig, const ConcreteAlgebra& alg) : sig_(sig), alg_(alg) {
    if (auto r = is_plain(sig)) throw Error(ErrorKind::kNotPlain, "not plain: " + *r);
    for (const auto& e : sig.entries) tels_.push_back(telescope(e.type));
  }

  Token apply(std::size_t entry, const std::vector<Value<Token>>& args) const {
    const std::string& name = sig_.entries[entry].name;
    std::vector<Token> key = texts(args);
    auto op = alg_.ops.find(name);
    if (op != alg_.ops.end()) {
      auto it = op->second.find(key);
      if (it != op->second.end()) return it->second;
    }
    throw Error(ErrorKind::kTableMiss, fmt::format("no table entry for {} at {}", name, join(key)));
  }

  auto constructor() const {
    return [this](const Spine<Token>& s) { return apply(s.entry, s.args); };
  }

  /// Carrier of a sort spine, empty if the index is not listed.
  const std::vector<Token>* carrier(const Spine<Token>& s) const {
    auto c = alg_.carriers.find(sig_.entries[s.entry].name);
    if (c == alg_.carriers.end()) return nullptr;
    auto it = c->second.find(texts(s.args));
    return it == c->second.end() ? nullptr : &it->second;
  }

  Spine<Token> sort_of(std::size_t entry, const std::vector<Value<Token>>& args) const {
    return eval_spine<Token>(tels_[entry].result, entry, args, constructor());
  }

  Spine<Token> domain(std::size_t entry, std::size_t k, const std::vector<Value<Token>>& env) const {
    return eval_spine<Token>(tels_[entry].binders[k].code, entry, env, constructor());
  }

  /// Calls f on every argument tuple of `entry` drawn from the carriers.
  template <class F>
  void for_each_tuple(std::size_t entry, F&& f) const {
    std::vector<Value<Token>> env;
    tuples(entry, 0, env, f);
  }

  const std::vector<Telescope>& telescopes() const { return tels_; }
  const Signature& signature() const { return sig_; }

 private:
  template <class F>
  void tuples(std::size_t entry, std::size_t k, std::vector<Value<Token>>& env, F& f) const {
    const Telescope& tel = tels_[entry];
    if (k == tel.binders.size()) {
      f(static_cast<const std::vector<Value<Token>>&>(env));
      return;
    }
    const Binder& b = tel.binders[k];
    if (b.meta) {
      for (std::uint32_t v = 0; v < b.meta_size; ++v) {
        env.push_back(Lit{literal_token(b, v)});
        tuples(entry, k + 1, env, f);
        env.pop_back();
      }
      return;
    }
    const std::vector<Token>* c = carrier(domain(entry, k, env));
    if (!c) return;
    for (const auto& t : *c) {
      env.push_back(t);
      tuples(entry, k + 1, env, f);
      env.pop_back();
    }
  }

  const Signature& sig_;
  const ConcreteAlgebra& alg_;
  std::vector<Telescope> tels_;
};

/// Checks carriers and tables are total and well-sorted.
inline void validate_algebra(const Signature& sig, const ConcreteAlgebra& alg) {
  Interpretation in(sig, alg);
  for (std::size_t e = 0; e < sig.entries.size(); ++e) {
    const std::string& name = sig.entries[e].name;
    if (in.telescopes()[e].is_sort) {
      auto c = alg.carriers.find(name);
      if (c == alg.carriers.end()) throw Error(ErrorKind::kBadInput, fmt::format("no carrier for sort {}", name));
      in.for_each_tuple(e, [&](const std::vector<Value<Token>>& args) {
        if (!c->second.count(texts(args))) {
          throw Error(ErrorKind::kBadInput, fmt::format("no carrier for {} at {}", name, join(texts(args))));
        }
      });
      continue;
    }
    in.for_each_tuple(e, [&](const std::vector<Value<Token>>& args) {
      Token r = in.apply(e, args);
      const std::vector<Token>* c = in.carrier(in.sort_of(e, args));
      if (!c || std::find(c->begin(), c->end(), r) == c->end()) {
        throw Error(ErrorKind::kBadInput,
                    fmt::format("{} at {} gives {}, which is not in its sort", name, join(texts(args)), r));
      }
    });
  }
}

/// The unique map out of the term algebra.
inline Token fold(const Interpretation& in, const FreeTerm& t) {
  std::vector<Value<Token>> args;
  for (const auto& a : t.args) {
    if (const auto* l = std::get_if<Lit>(&a)) {
      args.push_back(*l);
    } else {
      args.push_back(fold(in, *std::get<FreeTermPtr>(a)));
    }
  }
  return in.apply(t.entry, args);
}

inline Token fold(const Signature& sig, const ConcreteAlgebra& alg, const FreeTerm& t) {
  return fold(Interpretation(sig, alg), t);
}

// ---------------------------------------------------------------------------
// Homomorphisms.

/// Per-sort token maps; the key is the source index tuple and token.
using HomMap = std::map<std::string, std::map<std::pair<std::vector<Token>, Token>, Token>>;

inline HomMap hom_from_json(const nlohmann::json& j) {
  HomMap h;
  try {
    for (const auto& [sort, m] : j.items()) {
      auto& slot = h[sort];
      if (m.is_object()) {
        for (const auto& [from, to] : m.items()) slot[{{}, from}] = to.get<std::string>();
      } else {
        for (const auto& x : m) {
          slot[{tokens(x.at("index")), x.at("from").get<std::string>()}] = x.at("to").get<std::string>();
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kBadInput, fmt::format("malformed homomorphism: {}", e.what()));
  }
  return h;
}

struct Violation {
  std::string entry;
  std::vector<Token> args;
  Token lhs;  // h applied to the source constructor
  Token rhs;  // target constructor applied to h of the arguments
};

struct HomReport {
  std::size_t checked = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline Token hom_at(const HomMap& h, const std::string& sort, const std::vector<Token>& index, const Token& t) {
  auto s = h.find(sort);
  if (s != h.end()) {
    auto it = s->second.find({index, t});
    if (it != s->second.end()) return it->second;
  }
  throw Error(ErrorKind::kTableMiss, fmt::format("homomorphism undefined on {} {} at {}", sort, join(index), t));
}

/// Checks h(c₀(args)) = c₁(h(args)) for every constructor and every
/// argument tuple drawn from the source carriers.
inline HomReport check_hom(const Signature& sig, const ConcreteAlgebra& alg0, const ConcreteAlgebra& alg1,
                           const HomMap& h) {
  Interpretation in0(sig, alg0);
  Interpretation in1(sig, alg1);
  HomReport rep;
  for (std::size_t e = 0; e < sig.entries.size(); ++e) {
    const Telescope& tel = in0.telescopes()[e];
    if (tel.is_sort) continue;
    in0.for_each_tuple(e, [&](const std::vector<Value<Token>>& args) {
      std::vector<Value<Token>> mapped;
      std::vector<Value<Token>> prefix;
      for (std::size_t k = 0; k < args.size(); ++k) {
        if (tel.binders[k].meta) {
          mapped.push_back(args[k]);
        } else {
          Spine<Token> d = in0.domain(e, k, prefix);
          mapped.push_back(hom_at(h, sig.entries[d.entry].name, texts(d.args), std::get<Token>(args[k])));
        }
        prefix.push_back(args[k]);
      }
      Spine<Token> s = in0.sort_of(e, args);
      Token lhs = hom_at(h, sig.entries[s.entry].name, texts(s.args), in0.apply(e, args));
      Token rhs = in1.apply(e, mapped);
      ++rep.checked;
      if (lhs != rhs) rep.violations.push_back({sig.entries[e].name, texts(args), lhs, rhs});
    });
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Initiality probe.

/// A candidate map from enumerated terms (by text) to tokens.
using Candidate = std::map<std::string, Token>;

struct ProbeReport {
  std::size_t instances = 0;
  std::vector<std::string> existence_failures;
  bool has_candidate = false;
  HomReport candidate_hom;  // equations on the enumerated sub-carriers
  std::size_t compared = 0;
  std::vector<std::string> counterexamples;  // terms where candidate ≠ fold

  bool existence_ok() const { return existence_failures.empty(); }
  /// A candidate passing the equations agrees with fold.
  bool uniqueness_ok() const { return !candidate_hom.ok() || counterexamples.empty(); }
};

inline std::vector<FreeTermPtr> all_terms(const Enumerator::Pool& pool) {
  std::vector<FreeTermPtr> out;
  for (const auto& [s, ts] : pool) out.insert(out.end(), ts.begin(), ts.end());
  return out;
}

/// Checks the candidate's equations on the term-generated sub-carriers.
inline HomReport check_candidate(const Interpretation& in, const std::vector<FreeTermPtr>& terms,
                                 const Candidate& cand) {
  HomReport rep;
  auto image = [&](const FreeTerm& t) {
    auto it = cand.find(t.text);
    if (it == cand.end()) throw Error(ErrorKind::kTableMiss, fmt::format("candidate undefined on {}", t.text));
    return it->second;
  };
  for (const auto& t : terms) {
    std::vector<Value<Token>> args;
    for (const auto& a : t->args) {
      if (const auto* l = std::get_if<Lit>(&a)) {
        args.push_back(*l);
      } else {
        args.push_back(image(*std::get<FreeTermPtr>(a)));
      }
    }
    Token lhs = image(*t);
    Token rhs = in.apply(t->entry, args);
    ++rep.checked;
    if (lhs != rhs) rep.violations.push_back({t->head, texts(args), lhs, rhs});
  }
  return rep;
}

inline ProbeReport initiality_probe(const Signature& sig, const ConcreteAlgebra& alg,
                                    const std::optional<Candidate>& candidate, std::uint32_t depth) {
  Interpretation in(sig, alg);
  std::vector<FreeTermPtr> terms = all_terms(enumerate(sig, depth));
  ProbeReport rep;
  for (const auto& t : terms) {
    ++rep.instances;
    Token v = fold(in, *t);
    std::vector<Value<Token>> args;
    for (const auto& a : t->args) {
      if (const auto* l = std::get_if<Lit>(&a)) {
        args.push_back(*l);
      } else {
        args.push_back(fold(in, *std::get<FreeTermPtr>(a)));
      }
    }
    const std::vector<Token>* c = in.carrier(in.sort_of(t->entry, args));
    bool member = c && std::find(c->begin(), c->end(), v) != c->end();
    if (!member || v != in.apply(t->entry, args)) rep.existence_failures.push_back(t->text);
  }
  if (candidate) {
    rep.has_candidate = true;
    rep.candidate_hom = check_candidate(in, terms, *candidate);
    for (const auto& t : terms) {
      ++rep.compared;
      if (candidate->at(t->text) != fold(in, *t)) rep.counterexamples.push_back(t->text);
    }
  }
  std::sort(rep.existence_failures.begin(), rep.existence_failures.end());
  std::sort(rep.counterexamples.begin(), rep.counterexamples.end());
  return rep;
}

}  // namespace qiit::termmodel
