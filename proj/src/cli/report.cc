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

#include "privfunnel/cli/report.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "privfunnel/cli/csv.h"

namespace privfunnel::cli {
namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 40, kTop = 50, kBottom = 70;
constexpr int kTicks = 5;

std::string Px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string TraceCsv(const OptTrace& trace) {
  std::string out =
      "iter,objective,i_yu_nats,i_ys_nats,alpha,lambda,gradient_norm,theta_delta_norm\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const IterationRecord& r = trace.records[i];
    absl::StrAppend(&out, i, ",", FormatNumber(r.objective), ",", FormatNumber(r.i_yu), ",",
                    FormatNumber(r.i_ys), ",", FormatNumber(r.alpha), ",",
                    FormatNumber(r.lambda), ",", FormatNumber(r.gradient_norm), ",",
                    FormatNumber(r.theta_delta_norm), "\n");
  }
  return out;
}

std::string EmTraceCsv(const EmTrace& trace) {
  std::string out = "iter,cost,literal_cost,kl_gap,theta_delta_norm,alpha\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const EmRecord& r = trace.records[i];
    absl::StrAppend(&out, i, ",", FormatNumber(r.cost), ",", FormatNumber(r.literal_cost), ",",
                    FormatNumber(r.kl_gap), ",", FormatNumber(r.theta_delta_norm), ",",
                    FormatNumber(r.alpha), "\n");
  }
  return out;
}

std::string ChannelCsv(const Channel& channel) {
  const Eigen::MatrixXd p = channel.Probabilities();
  std::string out = "x";
  for (Eigen::Index y = 0; y < p.cols(); ++y) absl::StrAppend(&out, ",y", y);
  out += "\n";
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    absl::StrAppend(&out, x);
    for (Eigen::Index y = 0; y < p.cols(); ++y) absl::StrAppend(&out, ",", FormatNumber(p(x, y)));
    out += "\n";
  }
  return out;
}

std::string SigmaCsv(const NoiseSpec& noise) {
  std::string out = "coordinate,sigma2\n";
  for (Eigen::Index j = 0; j < noise.sigma_diag.size(); ++j) {
    absl::StrAppend(&out, j, ",", FormatNumber(noise.sigma_diag(j)), "\n");
  }
  return out;
}

std::string TradeoffCsv(const std::vector<TradeoffPoint>& points) {
  std::string out = absl::StrCat(kTradeoffHeader, "\n");
  for (const TradeoffPoint& p : points) {
    absl::StrAppend(&out, FormatNumber(p.param), ",", FormatNumber(p.i_yu), ",",
                    FormatNumber(p.i_ys), ",", FormatNumber(p.utility_score), ",",
                    FormatNumber(p.privacy_score), ",", p.status, "\n");
  }
  return out;
}

std::string CompareCsv(const std::vector<eval::CompareRow>& rows) {
  std::string out =
      "method,utility_score,privacy_score,utility_accuracy,attacker_accuracy,chance,"
      "mi_reduction_nats,status\n";
  for (const eval::CompareRow& r : rows) {
    absl::StrAppend(&out, std::string(eval::MethodName(r.method)));
    if (r.status.ok()) {
      absl::StrAppend(&out, ",", FormatNumber(r.card.utility_score), ",",
                      FormatNumber(r.card.privacy_score), ",",
                      FormatNumber(r.card.utility_accuracy), ",",
                      FormatNumber(r.card.attacker_accuracy), ",", FormatNumber(r.card.chance),
                      ",", FormatNumber(r.card.mi_reduction), ",ok\n");
    } else {
      std::string msg(r.status.message());
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      absl::StrAppend(&out, ",,,,,,,failed: ", msg, "\n");
    }
  }
  return out;
}

std::string TradeoffSvg(const std::vector<TradeoffPoint>& points, const std::string& x_label) {
  double x_lo = 0, x_hi = 1, y_hi = 0;
  if (!points.empty()) {
    x_lo = x_hi = points.front().param;
    for (const TradeoffPoint& p : points) {
      x_lo = std::min(x_lo, p.param);
      x_hi = std::max(x_hi, p.param);
      y_hi = std::max({y_hi, p.i_yu, p.i_ys});
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1;
  if (!(y_hi > 0)) y_hi = 1;
  y_hi *= 1.05;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double v) { return kTop + ph - v / y_hi * ph; };

  std::string out = absl::StrCat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" "
      "height=\"600\" font-family=\"sans-serif\" font-size=\"12\">\n",
      "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n",
      "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">Utility and leakage "
      "versus ",
      EscapeXml(x_label), "</text>\n");
  absl::StrAppend(&out, "<line x1=\"", Px(kLeft), "\" y1=\"", Px(kTop + ph), "\" x2=\"",
                  Px(kLeft + pw), "\" y2=\"", Px(kTop + ph), "\" stroke=\"black\"/>\n");
  absl::StrAppend(&out, "<line x1=\"", Px(kLeft), "\" y1=\"", Px(kTop), "\" x2=\"", Px(kLeft),
                  "\" y2=\"", Px(kTop + ph), "\" stroke=\"black\"/>\n");
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / kTicks;
    const double yv = y_hi * t / kTicks;
    absl::StrAppend(&out, "<text x=\"", Px(sx(xv)), "\" y=\"", Px(kTop + ph + 18),
                    "\" text-anchor=\"middle\">", FormatNumber(xv), "</text>\n");
    absl::StrAppend(&out, "<text x=\"", Px(kLeft - 8), "\" y=\"", Px(sy(yv) + 4),
                    "\" text-anchor=\"end\">", FormatNumber(yv), "</text>\n");
  }
  absl::StrAppend(&out, "<text x=\"", Px(kLeft + pw / 2), "\" y=\"", Px(kHeight - 20),
                  "\" text-anchor=\"middle\">", EscapeXml(x_label), "</text>\n");
  absl::StrAppend(&out, "<text x=\"20\" y=\"", Px(kTop + ph / 2),
                  "\" text-anchor=\"middle\" transform=\"rotate(-90 20 ", Px(kTop + ph / 2),
                  ")\">information (nats)</text>\n");

  const struct {
    const char* name;
    const char* color;
    double TradeoffPoint::*field;
  } series[] = {{"I(Y;U)", "#1f77b4", &TradeoffPoint::i_yu},
                {"I(Y;S)", "#d62728", &TradeoffPoint::i_ys}};
  int legend = 0;
  for (const auto& s : series) {
    std::string pts;
    for (const TradeoffPoint& p : points) {
      if (!pts.empty()) pts += ' ';
      absl::StrAppend(&pts, Px(sx(p.param)), ",", Px(sy(p.*(s.field))));
    }
    absl::StrAppend(&out, "<polyline fill=\"none\" stroke=\"", s.color,
                    "\" stroke-width=\"2\" points=\"", pts, "\"/>\n");
    for (const TradeoffPoint& p : points) {
      absl::StrAppend(&out, "<circle cx=\"", Px(sx(p.param)), "\" cy=\"", Px(sy(p.*(s.field))),
                      "\" r=\"3\" fill=\"", s.color, "\"/>\n");
    }
    const double ly = kTop + 10 + 18 * legend++;
    absl::StrAppend(&out, "<line x1=\"", Px(kLeft + pw - 110), "\" y1=\"", Px(ly), "\" x2=\"",
                    Px(kLeft + pw - 90), "\" y2=\"", Px(ly), "\" stroke=\"", s.color,
                    "\" stroke-width=\"2\"/>\n");
    absl::StrAppend(&out, "<text x=\"", Px(kLeft + pw - 84), "\" y=\"", Px(ly + 4), "\">",
                    s.name, "</text>\n");
  }
  out += "</svg>\n";
  return out;
}

}  // namespace privfunnel::cli
