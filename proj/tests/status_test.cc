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

#include <gtest/gtest.h>

namespace privfunnel {
namespace {

absl::StatusOr<int> Half(int v) {
  if (v % 2 != 0) return MakeError(ErrorKind::kInvalidArgument, "odd");
  return v / 2;
}

absl::StatusOr<int> Quarter(int v) {
  PF_ASSIGN_OR_RETURN(const int h, Half(v));
  PF_ASSIGN_OR_RETURN(const int q, Half(h));
  return q;
}

absl::Status CheckEven(int v) {
  PF_RETURN_IF_ERROR(Half(v).status());
  return absl::OkStatus();
}

TEST(StatusTest, KindRoundTripsThroughPayload) {
  for (ErrorKind kind : {ErrorKind::kSupportMismatch, ErrorKind::kParseError,
                         ErrorKind::kCannotAnonymize, ErrorKind::kNonFiniteObjective}) {
    const absl::Status s = MakeError(kind, "boom");
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(ErrorKindOf(s), kind);
    EXPECT_NE(s.message().find(std::string(ErrorKindName(kind))), absl::string_view::npos);
    EXPECT_NE(s.message().find("boom"), absl::string_view::npos);
  }
}

TEST(StatusTest, CanonicalCodes) {
  EXPECT_EQ(MakeError(ErrorKind::kSupportMismatch, "").code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(MakeError(ErrorKind::kIoError, "").code(), absl::StatusCode::kUnavailable);
  EXPECT_EQ(MakeError(ErrorKind::kUnreachableTarget, "").code(), absl::StatusCode::kOutOfRange);
  EXPECT_EQ(MakeError(ErrorKind::kParseError, "").code(), absl::StatusCode::kInvalidArgument);
}

TEST(StatusTest, OkAndForeignStatuses) {
  EXPECT_EQ(ErrorKindOf(absl::OkStatus()), ErrorKind::kNone);
  EXPECT_EQ(ErrorKindOf(absl::InternalError("x")), ErrorKind::kInvalidArgument);
}

TEST(StatusTest, MacrosPropagate) {
  EXPECT_EQ(*Quarter(8), 2);
  EXPECT_EQ(ErrorKindOf(Quarter(6)), ErrorKind::kInvalidArgument);
  EXPECT_TRUE(CheckEven(4).ok());
  EXPECT_FALSE(CheckEven(3).ok());
}

}  // namespace
}  // namespace privfunnel
