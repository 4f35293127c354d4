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

#ifndef XLP_STATUS_MACROS_H_
#define XLP_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define XLP_STATUS_CONCAT_INNER_(x, y) x##y
#define XLP_STATUS_CONCAT_(x, y) XLP_STATUS_CONCAT_INNER_(x, y)

#define XLP_RETURN_IF_ERROR(expr)                \
  do {                                           \
    if (absl::Status _xlp_status = (expr);       \
        !_xlp_status.ok()) {                     \
      return _xlp_status;                        \
    }                                            \
  } while (false)

#define XLP_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                               \
  if (!tmp.ok()) return std::move(tmp).status();   \
  lhs = std::move(tmp).value()

// Evaluates `expr` (an absl::StatusOr<T>), returning its status on error and
// otherwise moving the value into `lhs`.
#define XLP_ASSIGN_OR_RETURN(lhs, expr) \
  XLP_ASSIGN_OR_RETURN_IMPL_(           \
      XLP_STATUS_CONCAT_(_xlp_statusor_, __LINE__), lhs, expr)

#endif  // XLP_STATUS_MACROS_H_
