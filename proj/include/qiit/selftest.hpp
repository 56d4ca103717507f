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


// Self-check against the bundled signature of signatures.

#pragma once

#include <string>
#include <vector>

#include <fmt/core.h>

#include "qiit/elaborate.hpp"
#include "qiit/otl_check.hpp"
#include "qiit/translate.hpp"

namespace qiit {

struct SortArity {
  std::string name;
  std::size_t arity = 0;
};

struct SelfTestReport {
  bool ok = false;
  std::size_t entries = 0;
  std::size_t components = 0;  // Σ-components including the leading ⊤
  std::size_t expected = 0;
  std::vector<SortArity> sorts;  // components whose type ends in Set
  std::vector<std::string> validated;
  std::string failure;
};

/// Number of Π-binders in front of `t` if it ends in a universe.
inline std::optional<std::size_t> set_arity(const otl::Tm& t) {
  std::size_t n = 0;
  otl::Tm h = t;
  while (h->kind == otl::Kind::kPi) {
    ++n;
    h = h->kids[1];
  }
  if (h->kind != otl::Kind::kSet) return std::nullopt;
  return n;
}

inline SelfTestReport self_test(std::string_view text, std::size_t expected) {
  SelfTestReport rep;
  rep.expected = expected;
  Signature sig;
  try {
    sig = elaborate(text);
  } catch (const Error& e) {
    rep.failure = format_diagnostic("tossig", e);
    return rep;
  }
  rep.entries = sig.size();
  for (What w : kAllWhats) {
    Translation t = translate(sig, w);
    otl::Validation v = otl::validate(t.term, t.externals);
    if (!v.ok) {
      rep.failure = fmt::format("{} does not validate: {}", to_string(w), v.message);
      return rep;
    }
    rep.validated.emplace_back(to_string(w));
    if (w != What::kAlgebra) continue;
    auto comps = otl::sigma_components(t.term);
    if (!comps) {
      rep.failure = "algebra is not a Σ-chain";
      return rep;
    }
    rep.components = comps->size() + 1;
    for (std::size_t m = 0; m < comps->size(); ++m) {
      if (auto a = set_arity((*comps)[m])) rep.sorts.push_back({sig.entries[m].name, *a});
    }
  }
  if (rep.components != expected) {
    rep.failure = fmt::format("algebra has {} components, expected {}", rep.components, expected);
    return rep;
  }
  rep.ok = true;
  return rep;
}

}  // namespace qiit
