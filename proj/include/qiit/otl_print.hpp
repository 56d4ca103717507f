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

// Human-readable rendering of OTL terms.
//
// Σ-chains print as telescopes `⊤ × (N : Set i) × (zero : N) × …`. When the
// entry names of the signature are known, a variable bound to a chain prefix
// has its components printed by name: the chain variable's label picks the
// suffix (g → "", gD → "D", gS → "S", gM → "M", g0 → "0", g1 → "1").

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "qiit/otl.hpp"

namespace qiit::otl {

struct PrintOptions {
  std::vector<std::string> entry_names;
  std::optional<std::uint32_t> level_arg;
  bool flatten = false;    // drop the leading ⊤ of chains
  bool multiline = false;  // one chain component per line
};

inline std::string level_text(const Level& l) {
  if (!l.has_var) return fmt::format("{}", l.floor);
  std::string base = "i";
  for (std::uint32_t k = 0; k < l.offset; ++k) base = "suc " + (k == 0 ? base : "(" + base + ")");
  if (l.offset > 0 && l.floor > 0) base = "(" + base + ")";
  if (l.floor == 0) return base;
  return fmt::format("max {} {}", base, l.floor);
}

namespace detail {

inline std::optional<std::string> chain_suffix(const std::string& label) {
  if (label == "g") return "";
  if (label == "gD") return "D";
  if (label == "gS") return "S";
  if (label == "gM") return "M";
  if (label == "g0") return "0";
  if (label == "g1") return "1";
  return std::nullopt;
}

/// Number of components of a chain type, 0 if `t` is not a chain.
inline std::size_t chain_length(const Tm& t) {
  auto comps = sigma_components(t);
  return comps ? comps->size() : 0;
}

class Printer {
 public:
  explicit Printer(const PrintOptions& opts) : opts_(opts) {}

  std::string print(const Tm& t) { return go(t, 0); }

 private:
  struct Scope {
    std::string name;
    std::vector<std::string> comps;  // component names when bound to a chain prefix
  };

  // Precedence: 0 top, 1 arrow operand, 2 application argument.
  std::string go(const Tm& t, int prec) {
    switch (t->kind) {
      case Kind::kSet: {
        Level l = opts_.level_arg ? at(t->level, *opts_.level_arg) : t->level;
        if (!l.has_var && l.floor == 0) return "Set";
        std::string s = "Set " + wrap_level(l);
        return prec >= 2 ? "(" + s + ")" : s;
      }
      case Kind::kTop: return "⊤";
      case Kind::kTT: return "tt";
      case Kind::kRefl: return "refl";
      case Kind::kBool: return "Bool";
      case Kind::kFin: return paren(fmt::format("Fin {}", t->a), prec >= 2);
      case Kind::kBoolLit: return t->a ? "true" : "false";
      case Kind::kFinLit: return fmt::format("{}", t->a);
      case Kind::kExt: return t->label;
      case Kind::kFVar: return t->label;
      case Kind::kBVar: {
        if (t->a >= scopes_.size()) return fmt::format("#{}", t->a);
        return scopes_[scopes_.size() - 1 - t->a].name;
      }
      case Kind::kSigma: return paren(chain(t), prec >= 1);
      case Kind::kPi: {
        const Tm& dom = t->kids[0];
        const Tm& body = t->kids[1];
        ++nested_;
        std::string d = go(dom, 1);
        std::string dp = go_plain(dom);
        --nested_;
        bool dependent = body->loose > 0 && uses_zero(body, 0);
        std::string name = bind(t->label, dom);
        std::string b = go(body, 0);
        unbind();
        std::string s = dependent ? fmt::format("({} : {}) → {}", name, dp, b)
                                  : fmt::format("{} → {}", d, b);
        return paren(s, prec >= 1);
      }
      case Kind::kLam: {
        ++nested_;
        std::string d = go(t->kids[0], 0);
        --nested_;
        std::string name = bind(t->label, t->kids[0]);
        std::string b = go(t->kids[1], 0);
        unbind();
        return paren(fmt::format("λ ({} : {}) → {}", name, d, b), prec >= 1);
      }
      case Kind::kApp: {
        std::vector<Tm> args;
        Tm h = t;
        while (h->kind == Kind::kApp) {
          args.push_back(h->kids[1]);
          h = h->kids[0];
        }
        std::string s = go(h, 2);
        for (auto it = args.rbegin(); it != args.rend(); ++it) s += " " + go(*it, 2);
        return paren(s, prec >= 2);
      }
      case Kind::kProj1:
      case Kind::kProj2: {
        if (auto n = component_name(t)) return *n;
        return paren(fmt::format("{} {}", t->kind == Kind::kProj1 ? "fst" : "snd",
                                 go(t->kids[0], 2)),
                     prec >= 2);
      }
      case Kind::kEq:
        return paren(fmt::format("{} ≡ {}", go(t->kids[0], 1), go(t->kids[1], 1)), prec >= 1);
      case Kind::kTransport:
        return paren(fmt::format("transport {} {} {}", go(t->kids[0], 2), go(t->kids[1], 2),
                                 go(t->kids[2], 2)),
                     prec >= 2);
    }
    return "?";
  }

  std::string go_plain(const Tm& t) { return go(t, 0); }

  static std::string paren(std::string s, bool p) { return p ? "(" + s + ")" : s; }

  static std::string wrap_level(const Level& l) {
    std::string s = level_text(l);
    return s.find(' ') == std::string::npos ? s : "(" + s + ")";
  }

  static bool uses_zero(const Tm& t, std::uint32_t depth) {
    if (t->loose <= depth) return false;
    if (t->kind == Kind::kBVar) return t->a == depth;
    for (std::size_t k = 0; k < t->kids.size(); ++k) {
      if (uses_zero(t->kids[k], depth + (k == 1 && binds(t->kind) ? 1 : 0))) return true;
    }
    return false;
  }

  std::string fresh_name(std::string base) {
    if (base.empty()) base = "x";
    std::string n = base;
    while (taken(n)) n += "'";
    return n;
  }

  bool taken(const std::string& n) const {
    for (const auto& s : scopes_) {
      if (s.name == n) return true;
      for (const auto& c : s.comps) {
        if (c == n) return true;
      }
    }
    return false;
  }

  std::string bind(const std::string& label, const Tm& dom) {
    Scope s;
    s.name = fresh_name(label == "_" ? "x" : label);
    if (auto suf = chain_suffix(label)) {
      std::size_t c = chain_length(dom);
      if (c > 0 && c <= opts_.entry_names.size()) {
        for (std::size_t m = 0; m < c; ++m) s.comps.push_back(opts_.entry_names[m] + *suf);
      }
    }
    scopes_.push_back(std::move(s));
    return scopes_.back().name;
  }

  void unbind() { scopes_.pop_back(); }

  std::optional<std::string> component_name(const Tm& t) {
    if (t->kind != Kind::kProj2) return std::nullopt;
    std::size_t p = 0;
    Tm h = t->kids[0];
    while (h->kind == Kind::kProj1) {
      ++p;
      h = h->kids[0];
    }
    if (h->kind != Kind::kBVar || h->a >= scopes_.size()) return std::nullopt;
    const Scope& s = scopes_[scopes_.size() - 1 - h->a];
    if (p + 1 > s.comps.size()) return std::nullopt;
    return s.comps[s.comps.size() - 1 - p];
  }

  std::string chain(const Tm& t) {
    // Peel the left-nested Σ into its components.
    std::vector<const Node*> layers;
    Tm base = t;
    while (base->kind == Kind::kSigma) {
      layers.push_back(base.get());
      base = base->kids[0];
    }
    std::reverse(layers.begin(), layers.end());
    std::vector<std::string> parts;
    ++nested_;
    if (!(opts_.flatten && base->kind == Kind::kTop)) parts.push_back(go(base, 1));
    for (std::size_t m = 0; m < layers.size(); ++m) {
      const Node& n = *layers[m];
      std::optional<std::string> suf = chain_suffix(n.label);
      bool named = suf && base->kind == Kind::kTop && m < opts_.entry_names.size();
      std::string comp_name = named ? opts_.entry_names[m] + *suf : "";
      std::string prefix_label = n.label;
      Tm dom = n.kids[0];
      std::string var = bind(prefix_label, dom);
      std::string body = go(n.kids[1], 0);
      unbind();
      if (named) {
        parts.push_back(fmt::format("({} : {})", fresh_name(comp_name), body));
      } else {
        parts.push_back(fmt::format("({} : _) ▸ {}", var, body));
      }
    }
    --nested_;
    std::string sep = opts_.multiline && nested_ == 0 ? "\n  × " : " × ";
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
    return out.empty() ? "⊤" : out;
  }

  const PrintOptions& opts_;
  std::vector<Scope> scopes_;
  int nested_ = 0;
};

}  // namespace detail

inline std::string show(const Tm& t, const PrintOptions& opts = {}) {
  return detail::Printer(opts).print(t);
}

}  // namespace qiit::otl
