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

// Text renderings of optimizer traces, tradeoff curves and comparison
// tables. Every function is a pure function of its input.

#ifndef PRIVFUNNEL_CLI_REPORT_H_
#define PRIVFUNNEL_CLI_REPORT_H_

#include <string>
#include <vector>

#include "privfunnel/core_prob.h"
#include "privfunnel/em_opt.h"
#include "privfunnel/eval/compare.h"
#include "privfunnel/grad_opt.h"
#include "privfunnel/noise.h"

namespace privfunnel::cli {

inline constexpr char kTradeoffHeader[] =
    "param,i_yu_nats,i_ys_nats,utility_score,privacy_score,status";

std::string TraceCsv(const OptTrace& trace);
std::string EmTraceCsv(const EmTrace& trace);
std::string ChannelCsv(const Channel& channel);
std::string SigmaCsv(const NoiseSpec& noise);
std::string TradeoffCsv(const std::vector<TradeoffPoint>& points);
std::string CompareCsv(const std::vector<eval::CompareRow>& rows);

// 800 x 600 line chart of i_yu and i_ys against param.
std::string TradeoffSvg(const std::vector<TradeoffPoint>& points, const std::string& x_label);

}  // namespace privfunnel::cli

#endif  // PRIVFUNNEL_CLI_REPORT_H_
