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

#include "outmat/io.hpp"

#include <cmath>

namespace outmat {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return RealField{}.format(v);
}

json real_json(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

json backend_json(const PrimeField& f) {
  return {{"backend", "field"}, {"modulus", std::to_string(f.modulus())}};
}

json backend_json(const RealField&) { return {{"backend", "float"}}; }

json stats_to_json(const AttackStats& st) {
  return {{"trials", st.trials},
          {"accepted", st.accepted},
          {"honest_accepted", st.honest_accepted},
          {"differs", st.differs},
          {"wrong_accepted", st.wrong_accepted},
          {"noops", st.noops},
          {"target_ge4", st.target_at_least_4},
          {"noops_target_ge4", st.noops_target_at_least_4},
          {"exact_selected_rounds", st.exact_selected_rounds},
          {"exact_selected_rejected", st.exact_selected_rejected},
          {"accepted_freq", st.acceptance_frequency()},
          {"honest_accepted_freq", st.honest_acceptance_frequency()},
          {"differs_freq", st.differs_frequency()},
          {"wrong_accepted_freq", st.wrong_accepted_frequency()},
          {"noop_freq", st.noop_frequency()},
          {"noop_freq_target_ge4", st.noop_frequency_target_at_least_4()}};
}

std::string stats_csv_row(const AttackStats& st) {
  return std::to_string(st.trials) + ',' + format_real(st.acceptance_frequency()) +
         ',' + format_real(st.wrong_accepted_frequency()) + ',' +
         format_real(st.differs_frequency()) + ',' +
         format_real(st.noop_frequency()) + ',' +
         format_real(st.noop_frequency_target_at_least_4()) + ',' +
         format_real(st.honest_acceptance_frequency()) + '\n';
}

json profile_summary_json(const ResidualProfile& p) {
  return {{"trials", p.trials},
          {"rows", p.rows.size()},
          {"tolerance", real_json(p.tolerance)},
          {"nonzero_trials", p.nonzero_trials},
          {"nonzero_trial_fraction", p.nonzero_trial_fraction()},
          {"rows_over_tolerance", p.rows_over_tolerance},
          {"median_actual", real_json(p.median_actual)},
          {"median_relative", real_json(p.median_relative)},
          {"median_ratio", real_json(p.median_ratio)},
          {"max_ratio", real_json(p.max_ratio)}};
}

json cost_to_json(const CostReport& c) {
  return {{"client_flops", c.client_flops},
          {"server_flops", c.server_flops},
          {"comm_bytes", c.comm_bytes},
          {"overhead_factor", real_json(c.overhead_factor)},
          {"gain_ratio", real_json(c.gain_ratio)},
          {"beneficial", c.beneficial()}};
}

}  // namespace outmat
