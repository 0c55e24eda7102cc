// Copyright 2026 The MRFC Authors
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

#ifndef MRFC_UTILITY_HPP_
#define MRFC_UTILITY_HPP_

#include <string>

namespace mrfc {

enum class UtilityFamily {
  kLog,        // weight * log(s)
  kAlphaFair,  // weight * s^(1 - alpha) / (1 - alpha), alpha > 0, alpha != 1
};

// Strictly concave, increasing session utility. Only value and first/second
// derivatives are exposed; solvers never look at the family directly except
// for the closed-form price response used by the subgradient baseline.
class UtilitySpec {
 public:
  UtilitySpec() = default;

  static UtilitySpec Log(double weight = 1.0);
  static UtilitySpec AlphaFair(double weight, double alpha);

  UtilityFamily family() const { return family_; }
  double weight() const { return weight_; }
  double alpha() const { return alpha_; }

  double value(double s) const;
  double first(double s) const;
  double second(double s) const;

  // Solves U'(s) = price for s > 0. Requires price > 0.
  double inverse_marginal(double price) const;

  std::string family_name() const;

  bool operator==(const UtilitySpec&) const = default;

 private:
  UtilityFamily family_ = UtilityFamily::kLog;
  double weight_ = 1.0;
  double alpha_ = 1.0;
};

}  // namespace mrfc

#endif  // MRFC_UTILITY_HPP_
