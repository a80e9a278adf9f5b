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

#ifndef PRIVFUNNEL_EVAL_BASELINES_H_
#define PRIVFUNNEL_EVAL_BASELINES_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/eval/table.h"

namespace privfunnel::eval {

// Quantile bin codes in [0, bins): edges sit at the k/bins order statistics
// and tied values always share a code.
Eigen::VectorXi QuantileCodes(const Eigen::VectorXd& values, int bins);

// Replaces each named feature by its mean (numeric) or mode (categorical,
// smallest code on ties).
absl::StatusOr<SampleTable> MaskColumns(const SampleTable& table,
                                        const std::vector<std::string>& columns);

// Generalizes every feature column at a common bin level, starting from the
// finest level and coarsening until each combination of feature values
// occurs in at least k rows. Numeric bins use quantile edges and are
// replaced by their mean; categorical code v at level b falls in bin
// v * b / cardinality and is replaced by the smallest code of its bin.
absl::StatusOr<SampleTable> KAnonymize(const SampleTable& table, int k);

}  // namespace privfunnel::eval

#endif  // PRIVFUNNEL_EVAL_BASELINES_H_
