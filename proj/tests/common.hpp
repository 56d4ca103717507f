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


// Helpers shared by the test binaries.

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qiit/elaborate.hpp"
#include "qiit/signature.hpp"

namespace qiit::testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string signature_path(const std::string& stem) {
  return std::string(QIIT_SIGNATURE_DIR) + "/" + stem + ".qiit";
}

inline std::string corpus_text(const std::string& stem) { return read_file(signature_path(stem)); }

inline Signature corpus(const std::string& stem) { return elaborate(corpus_text(stem)); }

/// The six signatures of the corpus proper.
inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{"empty", "nat", "tree", "receq", "category", "tossig"};
  return names;
}

/// The corpus plus the auxiliary two-sort example.
inline const std::vector<std::string>& all_names() {
  static const std::vector<std::string> names{"empty",    "nat",     "tree",  "receq",
                                              "category", "twosort", "tossig"};
  return names;
}

#ifdef QIIT_GOLDEN_DIR
inline std::string golden(const std::string& name) { return read_file(std::string(QIIT_GOLDEN_DIR) + "/" + name); }
#endif

}  // namespace qiit::testutil
