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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <fmt/core.h>

namespace qiit {

/// A region of source text. Lines and columns are 1-based; a default span
/// (line 0) means "no location".
struct SourceSpan {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t offset = 0;
  std::uint32_t length = 0;

  bool known() const { return line != 0; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ErrorKind {
  kSyntax,
  kDuplicateName,
  kUnboundName,
  kTypeMismatch,
  kNotASort,
  kMetaWhereObjectExpected,
  kObjectWhereMetaExpected,
  kIdArgumentsDifferentSorts,
  kIllFormed,
  kValidationFailed,
  kTableMiss,
  kNotPlain,
  kBadInput,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSyntax: return "SyntaxError";
    case ErrorKind::kDuplicateName: return "DuplicateName";
    case ErrorKind::kUnboundName: return "UnboundName";
    case ErrorKind::kTypeMismatch: return "TypeMismatch";
    case ErrorKind::kNotASort: return "NotASort";
    case ErrorKind::kMetaWhereObjectExpected: return "MetaWhereObjectExpected";
    case ErrorKind::kObjectWhereMetaExpected: return "ObjectWhereMetaExpected";
    case ErrorKind::kIdArgumentsDifferentSorts: return "IdArgumentsDifferentSorts";
    case ErrorKind::kIllFormed: return "IllFormed";
    case ErrorKind::kValidationFailed: return "ValidationFailed";
    case ErrorKind::kTableMiss: return "TableMiss";
    case ErrorKind::kNotPlain: return "NotPlain";
    case ErrorKind::kBadInput: return "BadInput";
  }
  return "Error";
}

/// The single exception type thrown by the library for domain errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, SourceSpan span = {})
      : std::runtime_error(std::move(message)), kind_(kind), span_(span) {}

  ErrorKind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }

 private:
  ErrorKind kind_;
  SourceSpan span_;
};

/// `file:line:col: error: <message>`; the location part is dropped when the
/// error carries no span.
inline std::string format_diagnostic(std::string_view file, const Error& e) {
  if (e.span().known()) {
    return fmt::format("{}:{}:{}: error: {}", file, e.span().line,
                       e.span().column, e.what());
  }
  return fmt::format("{}: error: {}", file, e.what());
}

}  // namespace qiit
