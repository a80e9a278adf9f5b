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

#include "privfunnel/status.h"

#include <array>
#include <string>
#include <utility>

#include "absl/strings/cord.h"

namespace privfunnel {
namespace {

constexpr char kPayloadUrl[] = "privfunnel.dev/error-kind";

constexpr std::array<std::pair<ErrorKind, std::string_view>, 15> kNames = {{
    {ErrorKind::kNone, "None"},
    {ErrorKind::kInvalidArgument, "InvalidArgument"},
    {ErrorKind::kInvalidDistribution, "InvalidDistribution"},
    {ErrorKind::kSupportMismatch, "SupportMismatch"},
    {ErrorKind::kDimensionMismatch, "DimensionMismatch"},
    {ErrorKind::kNonFiniteObjective, "NonFiniteObjective"},
    {ErrorKind::kInvalidPerturbation, "InvalidPerturbation"},
    {ErrorKind::kSingularCovariance, "SingularCovariance"},
    {ErrorKind::kZeroNoiseEntropy, "ZeroNoiseEntropy"},
    {ErrorKind::kInfeasibleConstraint, "InfeasibleConstraint"},
    {ErrorKind::kUnreachableTarget, "UnreachableTarget"},
    {ErrorKind::kSingleClassTarget, "SingleClassTarget"},
    {ErrorKind::kCannotAnonymize, "CannotAnonymize"},
    {ErrorKind::kParseError, "ParseError"},
    {ErrorKind::kIoError, "IoError"},
}};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNone:
      return absl::StatusCode::kOk;
    case ErrorKind::kSupportMismatch:
    case ErrorKind::kSingularCovariance:
    case ErrorKind::kZeroNoiseEntropy:
    case ErrorKind::kSingleClassTarget:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kNonFiniteObjective:
      return absl::StatusCode::kAborted;
    case ErrorKind::kInfeasibleConstraint:
    case ErrorKind::kUnreachableTarget:
    case ErrorKind::kCannotAnonymize:
      return absl::StatusCode::kOutOfRange;
    case ErrorKind::kIoError:
      return absl::StatusCode::kUnavailable;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  std::string text(ErrorKindName(kind));
  text += ": ";
  text += message;
  absl::Status status(CodeFor(kind), text);
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(ErrorKindName(kind))));
  return status;
}

ErrorKind ErrorKindOf(const absl::Status& status) {
  if (status.ok()) return ErrorKind::kNone;
  const auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return ErrorKind::kInvalidArgument;
  const std::string name(*payload);
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return ErrorKind::kInvalidArgument;
}

}  // namespace privfunnel
