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

#include "mrfc/utility.hpp"

#include <cmath>

#include "mrfc/errors.hpp"

namespace mrfc {

UtilitySpec UtilitySpec::Log(double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw InvalidInputError("utility weight must be positive and finite");
  UtilitySpec u;
  u.family_ = UtilityFamily::kLog;
  u.weight_ = weight;
  u.alpha_ = 1.0;
  return u;
}

UtilitySpec UtilitySpec::AlphaFair(double weight, double alpha) {
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw InvalidInputError("utility weight must be positive and finite");
  if (!(alpha > 0.0) || !std::isfinite(alpha) || alpha == 1.0)
    throw InvalidInputError(
        "alpha_fair utility needs alpha > 0 and alpha != 1 (use log for 1)");
  UtilitySpec u;
  u.family_ = UtilityFamily::kAlphaFair;
  u.weight_ = weight;
  u.alpha_ = alpha;
  return u;
}

double UtilitySpec::value(double s) const {
  if (family_ == UtilityFamily::kLog) return weight_ * std::log(s);
  return weight_ * std::pow(s, 1.0 - alpha_) / (1.0 - alpha_);
}

double UtilitySpec::first(double s) const {
  if (family_ == UtilityFamily::kLog) return weight_ / s;
  return weight_ * std::pow(s, -alpha_);
}

double UtilitySpec::second(double s) const {
  if (family_ == UtilityFamily::kLog) return -weight_ / (s * s);
  return -alpha_ * weight_ * std::pow(s, -alpha_ - 1.0);
}

double UtilitySpec::inverse_marginal(double price) const {
  if (!(price > 0.0)) throw DomainError("inverse marginal needs a positive price");
  if (family_ == UtilityFamily::kLog) return weight_ / price;
  return std::pow(weight_ / price, 1.0 / alpha_);
}

std::string UtilitySpec::family_name() const {
  return family_ == UtilityFamily::kLog ? "log" : "alpha_fair";
}

}  // namespace mrfc
