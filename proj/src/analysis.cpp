// Copyright 2026 The outmat Authors.
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

#include "outmat/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "outmat/io.hpp"

namespace outmat {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return lower + (upper - lower) / 2.0;
}

void summarize(ResidualProfile& profile) {
  std::vector<double> actual, relative, ratio;
  actual.reserve(profile.rows.size());
  relative.reserve(profile.rows.size());
  ratio.reserve(profile.rows.size());
  std::vector<bool> nonzero(profile.trials, false);
  profile.rows_over_tolerance = 0;
  profile.max_ratio = 0.0;
  for (const auto& row : profile.rows) {
    actual.push_back(row.actual);
    relative.push_back(row.relative);
    ratio.push_back(row.ratio);
    profile.max_ratio = std::max(profile.max_ratio, row.ratio);
    if (row.actual != 0.0 && row.trial < nonzero.size()) nonzero[row.trial] = true;
    if (!(row.relative <= profile.tolerance)) ++profile.rows_over_tolerance;
  }
  profile.nonzero_trials =
      static_cast<std::size_t>(std::count(nonzero.begin(), nonzero.end(), true));
  profile.median_actual = median(std::move(actual));
  profile.median_relative = median(std::move(relative));
  profile.median_ratio = median(std::move(ratio));
}

std::string residual_csv_rows(const ResidualProfile& profile) {
  std::ostringstream out;
  for (const auto& row : profile.rows) {
    out << row.trial << ',' << row.row << ',' << format_real(row.actual) << ','
        << format_real(row.relative) << ',' << format_real(row.estimate) << ','
        << format_real(row.ratio) << '\n';
  }
  return out.str();
}

}  // namespace outmat
