// Copyright 2026 The JAG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jag {

enum class ErrorCode {
  filter_family_mismatch,
  unsatisfiable_filter,
  dimension_mismatch,
  degenerate_attribute_sample,
  empty_index,
  invalid_argument,
  io_error,
  version_mismatch,
  checksum_mismatch,
  truncated_file,
  tag_mismatch,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::filter_family_mismatch: return "FilterFamilyMismatch";
    case ErrorCode::unsatisfiable_filter: return "UnsatisfiableFilter";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::degenerate_attribute_sample: return "DegenerateAttributeSample";
    case ErrorCode::empty_index: return "EmptyIndex";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::version_mismatch: return "VersionMismatch";
    case ErrorCode::checksum_mismatch: return "ChecksumMismatch";
    case ErrorCode::truncated_file: return "TruncatedFile";
    case ErrorCode::tag_mismatch: return "TagMismatch";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

inline void require(bool condition, ErrorCode code, const char* detail) {
  if (!condition) fail(code, detail);
}

}  // namespace jag
