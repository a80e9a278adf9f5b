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

#include "privfunnel/cli/csv.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "absl/strings/str_cat.h"
#include "privfunnel/status.h"

namespace privfunnel::cli {
namespace {

std::vector<std::string_view> SplitLine(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                   : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

absl::Status LineError(int line, std::string_view what) {
  return MakeError(ErrorKind::kParseError, absl::StrCat("line ", line, ": ", std::string(what)));
}

}  // namespace

std::string FormatNumber(double v) {
  if (v == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string FormatExact(double v) {
  if (v == 0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

absl::StatusOr<CsvDocument> ParseCsv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    lines.push_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                    : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) return LineError(1, "missing header row");

  CsvDocument doc;
  std::set<std::string> seen;
  for (std::string_view cell : SplitLine(lines[0])) {
    const std::string name(Trim(cell));
    if (name.empty()) return LineError(1, "empty column name");
    if (!seen.insert(name).second) return LineError(1, absl::StrCat("duplicate column '", name, "'"));
    doc.header.push_back(name);
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(doc.header.size());
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (Trim(lines[i]).empty()) return LineError(line_no, "empty row");
    const std::vector<std::string_view> cells = SplitLine(lines[i]);
    if (static_cast<Eigen::Index>(cells.size()) != cols) {
      return LineError(line_no, absl::StrCat("expected ", cols, " fields, found ", cells.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string_view cell = Trim(cells[c]);
      double v = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        return LineError(line_no, absl::StrCat("column '", doc.header[c],
                                               "' is not a finite number: '", std::string(cell),
                                               "'"));
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  doc.values.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (Eigen::Index c = 0; c < cols; ++c) doc.values(r, c) = rows[r][c];
  return doc;
}

absl::StatusOr<eval::SampleTable> ToTable(const CsvDocument& doc, const TableDecl& decl) {
  auto find = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < doc.header.size(); ++i)
      if (doc.header[i] == name) return static_cast<int>(i);
    return -1;
  };
  for (const auto& [name, card] : decl.categorical) {
    if (find(name) < 0) {
      return MakeError(ErrorKind::kParseError, absl::StrCat("unknown column '", name, "'"));
    }
  }
  std::vector<std::string> features = decl.features;
  if (features.empty()) {
    for (const std::string& h : doc.header)
      if (h != decl.utility_label && h != decl.sensitive_label) features.push_back(h);
  }
  std::vector<std::pair<std::string, eval::ColumnRole>> order;
  for (const std::string& f : features) order.emplace_back(f, eval::ColumnRole::kFeature);
  order.emplace_back(decl.utility_label, eval::ColumnRole::kUtilityLabel);
  order.emplace_back(decl.sensitive_label, eval::ColumnRole::kSensitiveLabel);

  std::vector<eval::ColumnSpec> specs;
  Eigen::MatrixXd data(doc.values.rows(), static_cast<Eigen::Index>(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& [name, role] = order[k];
    const int src = find(name);
    if (src < 0) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line 1: column '", name, "' not found in header"));
    }
    data.col(k) = doc.values.col(src);
    int card = 0;
    if (auto it = decl.categorical.find(name); it != decl.categorical.end()) {
      card = it->second;
    } else if (role != eval::ColumnRole::kFeature) {
      card = doc.values.rows() > 0 ? static_cast<int>(doc.values.col(src).maxCoeff()) + 1 : 1;
      card = std::max(card, 1);
    }
    if (card > 0) {
      for (Eigen::Index r = 0; r < data.rows(); ++r) {
        const double v = data(r, k);
        if (v != std::floor(v) || v < 0 || v >= card) {
          return MakeError(ErrorKind::kParseError,
                           absl::StrCat("line ", r + 2, ": column '", name,
                                        "' needs an integer code in [0, ", card, ")"));
        }
      }
    }
    specs.push_back({name, role, card});
  }
  auto schema = eval::DatasetSchema::Create(std::move(specs));
  if (!schema.ok()) {
    return MakeError(ErrorKind::kParseError, std::string(schema.status().message()));
  }
  return eval::SampleTable::Create(*std::move(schema), std::move(data));
}

std::string TableToCsv(const eval::SampleTable& table) {
  std::string out;
  const auto& cols = table.schema().columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c > 0) out += ',';
    out += cols[c].name;
  }
  out += '\n';
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.data().cols(); ++c) {
      if (c > 0) out += ',';
      out += FormatExact(table.data()(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace privfunnel::cli
