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

#include <optional>
#include <string>

#include "moutard/conductivity.hpp"
#include "moutard/diffops.hpp"

namespace moutard {

// Generalized analytic functions: solutions of dzbar psi = q conj(psi), the
// conjugate equation dzbar psi+ = -conj(q) conj(psi+), the potential
// omega_{psi,psi+} with dz omega = psi psi+ and dzbar omega = -conj(psi psi+),
// and the simple Moutard transform built from a fixed pair (f, f+).

/// Coefficient of the GAF equation together with its conductivity-type
/// compatibility defect max |dzbar q - dz conj(q)|.
struct GafCoefficient {
  ComplexField q;
  double compat_defect;
};

/// Wraps a coefficient field, recomputing the compatibility defect.
GafCoefficient make_gaf_coefficient(ComplexField q);

/// q = -1/2 dz log(sigma). 2D only.
GafCoefficient sigma_to_q(const Conductivity& sigma);

/// sigma = sigma_base * exp(-2 Re W), W the quadrature of q dzeta + conj(q)
/// dzbar(zeta) from `base`. Throws NotConductivityType when the compatibility
/// defect exceeds tol_compat (default 50 h^2 max(1, |q|)).
Conductivity q_to_sigma(const GafCoefficient& q, const GridIndex& base,
                        double sigma_base,
                        std::optional<double> tol_compat = std::nullopt);

/// Max norm of dzbar(psi) - q conj(psi) over the interior evaluation set
/// (two rows in from every face, like all residual norms).
double check_gaf(const ComplexField& psi, const GafCoefficient& q);
/// Max norm of dzbar(psi+) + conj(q) conj(psi+)  (the conjugate equation).
double check_gaf_conjugate(const ComplexField& psi_plus,
                           const GafCoefficient& q);

/// Dirac components -> GAF pair: psi+ = (psi1 + conj psi2)/2,
/// psi- = (psi1 - conj psi2)/(2i).
std::pair<ComplexField, ComplexField> dirac_split(const ComplexField& psi1,
                                                  const ComplexField& psi2);
/// Inverse map: psi1 = psi+ + i psi-, psi2 = conj(psi+) + i conj(psi-).
std::pair<ComplexField, ComplexField> dirac_join(const ComplexField& psi_plus,
                                                 const ComplexField& psi_minus);

enum class OmegaMode { raw, nonvanishing };

/// The imaginary-valued potential of a conjugate pair. The integration
/// constant is always explicit: raw mode adds 0, nonvanishing mode adds
/// i*(1 + max |Im omega0|) which keeps Im(omega) >= 1 on the grid, and an
/// explicit constant_im overrides both.
struct OmegaPotential {
  ComplexField omega;
  Complex constant;       // pure-imaginary constant actually added
  double defect;          // path-independence defect
  double min_abs;         // min |omega| over the grid
  double compat_residual; // max |dzbar(psi psi+) - dz(-conj(psi psi+))|
  std::string pair_psi;   // identifiers of the pair used
  std::string pair_psi_plus;
  bool pair_warning;      // inputs did not look like a conjugate pair
  bool sanitized;         // nonfinite integrand samples were zeroed
};

OmegaPotential omega(const ComplexField& psi, const ComplexField& psi_plus,
                     OmegaMode mode, const GridIndex& base,
                     std::optional<double> constant_im = std::nullopt,
                     std::string label_psi = {},
                     std::string label_psi_plus = {});

/// q~ = q + f conj(f+) / omega. Zeros of omega throw SingularOmega unless
/// policy.allow, in which case the affected points become NaN sentinels.
GafCoefficient moutard_q(const GafCoefficient& q, const ComplexField& f,
                         const ComplexField& f_plus, const OmegaPotential& w,
                         const SingularPolicy& policy = {});

/// psi~ = psi - (omega_{psi,f+} / omega_{f,f+}) f. The numerator potential is
/// built internally from `base` with the explicit constant
/// i*numerator_constant_im (0 by default).
ComplexField moutard_psi(const ComplexField& psi, const ComplexField& f,
                         const ComplexField& f_plus, const OmegaPotential& w_ff,
                         const GridIndex& base,
                         double numerator_constant_im = 0.0,
                         const SingularPolicy& policy = {});

/// psi+~ = psi+ - (omega_{f,psi+} / omega_{f,f+}) f+.
ComplexField moutard_psi_plus(const ComplexField& psi_plus,
                              const ComplexField& f,
                              const ComplexField& f_plus,
                              const OmegaPotential& w_ff, const GridIndex& base,
                              double numerator_constant_im = 0.0,
                              const SingularPolicy& policy = {});

} // namespace moutard
