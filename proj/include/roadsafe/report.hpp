// Copyright 2026 The Roadsafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROADSAFE_REPORT_HPP_
#define ROADSAFE_REPORT_HPP_

#include <cassert>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "roadsafe/metrics.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

/// One (intention x attack setting) result row. m_saf is derived from the
/// counts, so the identity m_saf = (1 - m_cls) * m_suc holds by
/// construction; it is still asserted at build time of every row.
struct ReportRow {
  Intention intention{Intention::Straight};
  std::string setting;
  SafetyRates rates;
  std::optional<double> ap_easy;
  std::optional<double> ap_moderate;
  std::optional<double> ap_hard;
};

struct MetricsReport {
  std::vector<ReportRow> rows;

  void add_row(ReportRow row) {
    if (row.rates.m_cls) {
      assert(std::abs(row.rates.m_saf -
                      (1.0 - *row.rates.m_cls) * row.rates.m_suc) < 1e-12);
    }
    rows.push_back(std::move(row));
  }
};

}  // namespace roadsafe

#endif  // ROADSAFE_REPORT_HPP_
