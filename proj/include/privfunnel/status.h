// Copyright 2026 The privfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVFUNNEL_STATUS_H_
#define PRIVFUNNEL_STATUS_H_

#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privfunnel {

// Domain error kinds. Each maps onto a canonical absl code and is also
// attached to the status as a payload so callers can branch on the kind
// without parsing messages.
enum class ErrorKind {
  kNone,
  kInvalidArgument,
  kInvalidDistribution,
  kSupportMismatch,
  kDimensionMismatch,
  kNonFiniteObjective,
  kInvalidPerturbation,
  kSingularCovariance,
  kZeroNoiseEntropy,
  kInfeasibleConstraint,
  kUnreachableTarget,
  kSingleClassTarget,
  kCannotAnonymize,
  kParseError,
  kIoError,
};

std::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns kNone for OK statuses and kInvalidArgument for foreign errors that
// carry no payload.
ErrorKind ErrorKindOf(const absl::Status& status);

template <typename T>
ErrorKind ErrorKindOf(const absl::StatusOr<T>& status_or) {
  return ErrorKindOf(status_or.status());
}

}  // namespace privfunnel

#define PF_STATUS_CONCAT_INNER_(a, b) a##b
#define PF_STATUS_CONCAT_(a, b) PF_STATUS_CONCAT_INNER_(a, b)

#define PF_RETURN_IF_ERROR(expr)              \
  do {                                        \
    const absl::Status pf_status_ = (expr);   \
    if (!pf_status_.ok()) return pf_status_;  \
  } while (0)

#define PF_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                              \
  if (!tmp.ok()) return tmp.status();              \
  lhs = std::move(tmp).value()

#define PF_ASSIGN_OR_RETURN(lhs, rexpr) \
  PF_ASSIGN_OR_RETURN_IMPL_(PF_STATUS_CONCAT_(pf_statusor_, __LINE__), lhs, rexpr)

#endif  // PRIVFUNNEL_STATUS_H_
