//
// Copyright 2026 The xlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef XLP_FILE_UTIL_H_
#define XLP_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace xlp {

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over `path`, so readers see
// either the old contents or the new ones.
absl::Status WriteFileAtomically(const std::filesystem::path& path,
                                 std::string_view contents);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

}  // namespace xlp

#endif  // XLP_FILE_UTIL_H_
