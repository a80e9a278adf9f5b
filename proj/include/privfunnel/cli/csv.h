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

// CSV dialect: UTF-8, comma separated, mandatory header row, '.' decimal
// point, unquoted numerics.

#ifndef PRIVFUNNEL_CLI_CSV_H_
#define PRIVFUNNEL_CLI_CSV_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/eval/table.h"

namespace privfunnel::cli {

// Report numbers: 9 significant digits.
std::string FormatNumber(double v);
// Shortest text that reads back to exactly `v`.
std::string FormatExact(double v);

struct CsvDocument {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // rows x header.size()
};

// All cells must be numeric. ParseError messages carry the 1-based line.
absl::StatusOr<CsvDocument> ParseCsv(std::string_view text);

// Column roles for reading a document into a SampleTable. Columns listed in
// `categorical` carry their cardinality; a label without one gets
// max code + 1. With `features` empty every non-label column is a feature.
struct TableDecl {
  std::vector<std::string> features;
  std::string utility_label;
  std::string sensitive_label;
  std::map<std::string, int> categorical;
};

absl::StatusOr<eval::SampleTable> ToTable(const CsvDocument& doc, const TableDecl& decl);

// Writes every column with FormatExact so a read-back is value-identical.
std::string TableToCsv(const eval::SampleTable& table);

}  // namespace privfunnel::cli

#endif  // PRIVFUNNEL_CLI_CSV_H_
