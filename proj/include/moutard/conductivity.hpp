/*******************************************************************************
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "moutard/field.hpp"

namespace moutard {

/// 1 = degenerate point (excluded from verification, value is a NaN sentinel).
using Mask = std::vector<std::uint8_t>;

/// How pointwise divisions and transformed conductivities treat degeneracies.
/// With allow=false any (near-)zero divisor throws; with allow=true points
/// where |denominator| <= rel_threshold * max|denominator| are masked and
/// carried as NaN sentinels.
struct SingularPolicy {
  bool allow = false;
  double rel_threshold = 0.02;
};

/// Positive scalar field with recorded bounds and an optional degeneracy mask.
class Conductivity {
public:
  /// All samples must be finite and strictly positive.
  static Conductivity strict(ScalarField sigma);
  /// Nonfinite or nonpositive samples become masked sentinels.
  static Conductivity masked_from_field(ScalarField sigma);
  /// Explicit mask; masked samples are replaced by NaN sentinels, unmasked
  /// samples must be positive.
  static Conductivity with_mask(ScalarField sigma, Mask mask);

  const ScalarField& field() const { return sigma_; }
  const Grid& grid() const { return sigma_.grid(); }

  double sigma0() const { return sigma0_; } // observed min off mask
  double sigma1() const { return sigma1_; } // observed max off mask

  bool degenerate() const { return masked_count_ > 0; }
  std::size_t masked_count() const { return masked_count_; }
  /// Empty when no point is masked.
  const Mask& mask() const { return mask_; }

  /// 1/sigma with the same mask.
  Conductivity reciprocal() const;

private:
  Conductivity(ScalarField sigma, Mask mask, double s0, double s1,
               std::size_t masked);

  ScalarField sigma_;
  Mask mask_;
  double sigma0_;
  double sigma1_;
  std::size_t masked_count_;
};

/// Pointwise a/b; zeros of b throw ZeroDivisor unless policy.allow, in which
/// case near-zero points of b become NaN and are reported in the mask.
ScalarField guarded_div(const ScalarField& a, const ScalarField& b,
                        const SingularPolicy& policy, Mask* mask_out);

/// Reciprocal with the same guarding.
ScalarField guarded_reciprocal(const ScalarField& b,
                               const SingularPolicy& policy, Mask* mask_out);

} // namespace moutard
