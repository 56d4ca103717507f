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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qiit/core.hpp"
#include "qiit/error.hpp"

namespace qiit {

/// `external A;` declares a set in Set_j; `external c : A;` declares an
/// opaque element of a meta type.
struct External {
  std::string name;
  std::optional<core::Meta> type;
  SourceSpan span;

  bool is_set() const { return !type.has_value(); }
};

struct Entry {
  std::string name;
  core::Ty type;
  SourceSpan span;
};

/// A checked telescope. Entry k's type lives in the context of entries
/// 0..k-1, so inside it entry m is `Var(k - 1 - m)`.
struct Signature {
  std::string name;
  std::uint32_t level_j = 0;
  std::vector<External> externals;
  std::vector<Entry> entries;

  std::size_t size() const { return entries.size(); }

  const External* find_external(const std::string& n) const {
    for (const auto& e : externals) {
      if (e.name == n) return &e;
    }
    return nullptr;
  }

  std::optional<std::size_t> find_entry(const std::string& n) const {
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k].name == n) return k;
    }
    return std::nullopt;
  }

  /// The kernel context holding entries 0..count-1.
  core::Context context(std::size_t count) const {
    core::Context ctx;
    for (std::size_t k = 0; k < count; ++k) ctx.push({entries[k].name, entries[k].type});
    return ctx;
  }
};

/// α-equality of two checked telescopes (names of entries are compared,
/// binder names are not).
inline bool same_telescope(const Signature& a, const Signature& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    if (a.entries[k].name != b.entries[k].name) return false;
    if (!(a.entries[k].type == b.entries[k].type)) return false;
  }
  return true;
}

}  // namespace qiit
