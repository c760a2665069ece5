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

#include "outmat/adversary.hpp"

#include <cmath>
#include <string>

namespace outmat {

std::string_view to_string(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::kHonest:
      return "honest";
    case BehaviorKind::kRandomForge:
      return "random-forge";
    case BehaviorKind::kRhoPerturb:
      return "rho";
    case BehaviorKind::kRhoPerturbRelative:
      return "rho-relative";
  }
  return "unknown";
}

BehaviorKind parse_behavior(std::string_view text) {
  for (auto kind : {BehaviorKind::kHonest, BehaviorKind::kRandomForge,
                    BehaviorKind::kRhoPerturb, BehaviorKind::kRhoPerturbRelative}) {
    if (text == to_string(kind)) return kind;
  }
  throw ConfigError("unknown server behavior '" + std::string(text) + "'");
}

double rho_perturbation(double value, BehaviorKind kind, const FloatModel& model) {
  if (kind == BehaviorKind::kRhoPerturb || value == 0.0 || !std::isfinite(value)) {
    return model.rho();
  }
  return std::ldexp(model.rho(), std::ilogb(value));
}

AttackStats aggregate(const std::vector<AttackTrial>& trials) {
  AttackStats st;
  st.trials = trials.size();
  for (const auto& t : trials) {
    st.accepted += t.accepted;
    st.honest_accepted += t.honest_accepted;
    st.differs += t.differs;
    st.wrong_accepted += t.accepted && t.differs;
    st.noops += t.noop;
    st.target_at_least_4 += t.target_at_least_4;
    st.noops_target_at_least_4 += t.target_at_least_4 && t.noop;
    st.exact_selected_rounds += t.exact_selected_rounds;
    st.exact_selected_rejected += t.exact_selected_rejected;
  }
  return st;
}

}  // namespace outmat
