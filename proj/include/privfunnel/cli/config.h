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

// JSON run configuration. One document describes the data source, the
// optimizer settings and the command payload; unknown keys are rejected.

#ifndef PRIVFUNNEL_CLI_CONFIG_H_
#define PRIVFUNNEL_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "privfunnel/cli/csv.h"
#include "privfunnel/core_prob.h"
#include "privfunnel/eval/compare.h"
#include "privfunnel/grad_opt.h"
#include "privfunnel/noise.h"

namespace privfunnel::cli {

struct DatasetDecl {
  std::optional<std::filesystem::path> csv;  // resolved against the config dir
  TableDecl table;
  // Synthetic source: "structured_gaussian", "correlated_gaussian", "gaussian"
  // (the configured model) or "joint" (the configured discrete joint).
  std::optional<std::string> generate;
  Eigen::Index n = 2000;
  std::uint64_t sample_seed = 0;
};

struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = ".";
  std::string algorithm = "grad";  // grad | em | noise
  TradeoffConfig tradeoff;

  std::optional<DiscreteJoint> joint;
  std::optional<GaussianModel> gaussian;
  std::optional<DatasetDecl> dataset;

  double noise_slack = 0.1;
  std::optional<double> sigma_cap;
  int bins = 3;  // feature discretization for grad/em on tables

  std::vector<double> sweep_values;

  std::vector<eval::Method> methods;
  eval::CompareOptions compare;

  std::vector<std::pair<std::string, std::string>> mi_pairs;
  int mi_bins = 16;
};

// ParseError messages name the offending key, or the line for JSON syntax.
absl::StatusOr<RunConfig> ParseConfig(std::string_view json_text,
                                      const std::filesystem::path& base_dir);

// Materializes the configured table (CSV or synthetic sample).
absl::StatusOr<eval::SampleTable> LoadDataset(const RunConfig& cfg);

}  // namespace privfunnel::cli

#endif  // PRIVFUNNEL_CLI_CONFIG_H_
