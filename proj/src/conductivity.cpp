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
#include "moutard/conductivity.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace moutard {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Conductivity::Conductivity(ScalarField sigma, Mask mask, double s0, double s1,
                           std::size_t masked)
    : sigma_(std::move(sigma)), mask_(std::move(mask)), sigma0_(s0),
      sigma1_(s1), masked_count_(masked) {}

Conductivity Conductivity::strict(ScalarField sigma) {
  double s0 = std::numeric_limits<double>::infinity();
  double s1 = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double v = sigma[i];
    if (!std::isfinite(v) || v <= 0.0)
      throw PositivityError("Conductivity: nonpositive sample at index " +
                            std::to_string(i));
    s0 = std::min(s0, v);
    s1 = std::max(s1, v);
  }
  return {std::move(sigma), Mask{}, s0, s1, 0};
}

Conductivity Conductivity::masked_from_field(ScalarField sigma) {
  Mask m(sigma.size(), 0);
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (!std::isfinite(sigma[i]) || sigma[i] <= 0.0)
      m[i] = 1;
  return with_mask(std::move(sigma), std::move(m));
}

Conductivity Conductivity::with_mask(ScalarField sigma, Mask mask) {
  if (mask.size() != sigma.size())
    throw GridMismatch("Conductivity: mask length does not match field");
  std::vector<double> v = sigma.values();
  double s0 = std::numeric_limits<double>::infinity();
  double s1 = 0.0;
  std::size_t masked = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (mask[i]) {
      v[i] = kNaN;
      ++masked;
      continue;
    }
    if (!std::isfinite(v[i]) || v[i] <= 0.0)
      throw PositivityError("Conductivity: nonpositive unmasked sample at index " +
                            std::to_string(i));
    s0 = std::min(s0, v[i]);
    s1 = std::max(s1, v[i]);
  }
  if (masked == v.size())
    throw PositivityError("Conductivity: all points masked");
  if (masked == 0)
    mask.clear();
  return {ScalarField(sigma.grid(), std::move(v)), std::move(mask), s0, s1,
          masked};
}

Conductivity Conductivity::reciprocal() const {
  std::vector<double> v(sigma_.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = 1.0 / sigma_[i];
  Mask m = mask_;
  if (m.empty())
    return strict(ScalarField(grid(), std::move(v)));
  return with_mask(ScalarField(grid(), std::move(v)), std::move(m));
}

ScalarField guarded_div(const ScalarField& a, const ScalarField& b,
                        const SingularPolicy& policy, Mask* mask_out) {
  require_same_grid(a.grid(), b.grid(), "guarded_div");
  const double cutoff = policy.rel_threshold * b.max_abs();
  std::vector<double> out(a.size());
  Mask m(policy.allow ? a.size() : 0, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double den = b[i];
    if (!std::isfinite(den) || std::fabs(den) <= (policy.allow ? cutoff : 0.0)) {
      if (!policy.allow)
        throw ZeroDivisor("division by zero at index " + std::to_string(i));
      out[i] = kNaN;
      m[i] = 1;
    } else {
      out[i] = a[i] / den;
    }
  }
  if (mask_out != nullptr)
    *mask_out = std::move(m);
  return {a.grid(), std::move(out)};
}

ScalarField guarded_reciprocal(const ScalarField& b,
                               const SingularPolicy& policy, Mask* mask_out) {
  return guarded_div(ScalarField::constant(b.grid(), 1.0), b, policy, mask_out);
}

} // namespace moutard
