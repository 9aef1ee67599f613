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
#include "moutard/gaf.hpp"

#include <cmath>
#include <limits>

#include "moutard/verify.hpp"

namespace moutard {

namespace {

constexpr double kImagTol = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double min_modulus(const ComplexField& f) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double s = std::hypot(f[i].real(), f[i].imag());
    if (s < m)
      m = s;
  }
  return m;
}

} // namespace

GafCoefficient make_gaf_coefficient(ComplexField q) {
  const double defect = verify::interior_max_abs(
      sub(wirtinger_dzbar(q), wirtinger_dz(conj(q))));
  return {std::move(q), defect};
}

GafCoefficient sigma_to_q(const Conductivity& sigma) {
  if (sigma.grid().dim() != 2)
    throw DimensionError("sigma_to_q: requires a 2D grid");
  const ScalarField log_sigma =
      map(sigma.field(), [](double s) { return std::log(s); });
  return make_gaf_coefficient(scale(wirtinger_dz(log_sigma), -0.5));
}

Conductivity q_to_sigma(const GafCoefficient& q, const GridIndex& base,
                        double sigma_base, std::optional<double> tol_compat) {
  if (!(sigma_base > 0.0))
    throw PositivityError("q_to_sigma: sigma_base must be positive");
  const double h = q.q.grid().max_spacing();
  const double tol =
      tol_compat.value_or(50.0 * h * h * std::max(1.0, q.q.max_abs()));
  if (!(q.compat_defect <= tol))
    throw NotConductivityType(
        "q_to_sigma: compatibility defect " + std::to_string(q.compat_defect) +
        " exceeds tolerance " + std::to_string(tol));
  // W is exactly real: the x1 integrand q + conj(q) and the x2 integrand
  // i(q - conj(q)) have zero imaginary part in floating point.
  const PathIntegral w = path_integrate(q.q, conj(q.q), base);
  const ScalarField re_w = w.w.real_part();
  return Conductivity::strict(map(
      re_w, [sigma_base](double x) { return sigma_base * std::exp(-2.0 * x); }));
}

double check_gaf(const ComplexField& psi, const GafCoefficient& q) {
  require_same_grid(psi.grid(), q.q.grid(), "check_gaf");
  return verify::interior_max_abs(
      sub(wirtinger_dzbar(psi), mul(q.q, conj(psi))));
}

double check_gaf_conjugate(const ComplexField& psi_plus,
                           const GafCoefficient& q) {
  require_same_grid(psi_plus.grid(), q.q.grid(), "check_gaf_conjugate");
  return verify::interior_max_abs(
      add(wirtinger_dzbar(psi_plus), mul(conj(q.q), conj(psi_plus))));
}

std::pair<ComplexField, ComplexField> dirac_split(const ComplexField& psi1,
                                                  const ComplexField& psi2) {
  require_same_grid(psi1.grid(), psi2.grid(), "dirac_split");
  const ComplexField c2 = conj(psi2);
  ComplexField plus = scale(add(psi1, c2), 0.5);
  // 1/(2i) x = -0.5 * (i x)
  ComplexField minus = scale(mul_i(sub(psi1, c2)), -0.5);
  return {std::move(plus), std::move(minus)};
}

std::pair<ComplexField, ComplexField> dirac_join(const ComplexField& psi_plus,
                                                 const ComplexField& psi_minus) {
  require_same_grid(psi_plus.grid(), psi_minus.grid(), "dirac_join");
  ComplexField psi1 = add(psi_plus, mul_i(psi_minus));
  ComplexField psi2 = add(conj(psi_plus), mul_i(conj(psi_minus)));
  return {std::move(psi1), std::move(psi2)};
}

OmegaPotential omega(const ComplexField& psi, const ComplexField& psi_plus,
                     OmegaMode mode, const GridIndex& base,
                     std::optional<double> constant_im, std::string label_psi,
                     std::string label_psi_plus) {
  require_same_grid(psi.grid(), psi_plus.grid(), "omega");
  ComplexField p = mul(psi, psi_plus);

  // Quadratures through degenerate points: treat the integrand as 0 there.
  bool sanitized = false;
  {
    std::vector<Complex> pv = p.values();
    for (auto& z : pv) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        z = Complex(0.0, 0.0);
        sanitized = true;
      }
    }
    if (sanitized)
      p = ComplexField(p.grid(), std::move(pv));
  }

  const ComplexField qf = neg(conj(p));
  const double compat = max_abs_diff(wirtinger_dzbar(p), wirtinger_dz(qf));
  const double h = p.grid().max_spacing();
  const bool warn =
      sanitized || compat > 50.0 * h * h * std::max(1.0, p.max_abs());

  PathIntegral pi = path_integrate(p, qf, base);

  double c = 0.0;
  if (constant_im.has_value()) {
    c = *constant_im;
  } else if (mode == OmegaMode::nonvanishing) {
    c = 1.0 + pi.w.imag_part().max_abs();
  }
  ComplexField om = std::move(pi.w);
  if (c != 0.0) {
    std::vector<Complex> v = om.values();
    for (auto& z : v)
      z = Complex(z.real(), z.imag() + c);
    om = ComplexField(om.grid(), std::move(v));
  }

  const double max_re = om.real_part().max_abs();
  const double max_im = om.imag_part().max_abs();
  if (max_re > kImagTol * (1.0 + max_im))
    throw CompatibilityError(
        "omega: potential is not imaginary-valued (inputs were not a "
        "conjugate pair)");

  OmegaPotential out{std::move(om), Complex(0.0, c),          pi.defect,
                     0.0,           compat,                   std::move(label_psi),
                     std::move(label_psi_plus), warn, sanitized};
  out.min_abs = min_modulus(out.omega);
  return out;
}

namespace {

// f conj(f+) / omega with zero handling shared by the transform ops.
ComplexField singular_ratio(const ComplexField& num, const OmegaPotential& w,
                            const SingularPolicy& policy, const char* where) {
  if (w.min_abs <= 0.0 && !policy.allow)
    throw SingularOmega(std::string(where) +
                        ": omega vanishes on the grid (singular mode not "
                        "enabled)");
  ComplexField ratio = div(num, w.omega);
  if (policy.allow) {
    const double cutoff = policy.rel_threshold * w.omega.max_abs();
    std::vector<Complex> v = ratio.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Complex om = w.omega[i];
      if (std::hypot(om.real(), om.imag()) <= cutoff)
        v[i] = Complex(kNaN, kNaN);
    }
    ratio = ComplexField(ratio.grid(), std::move(v));
  }
  return ratio;
}

} // namespace

GafCoefficient moutard_q(const GafCoefficient& q, const ComplexField& f,
                         const ComplexField& f_plus, const OmegaPotential& w,
                         const SingularPolicy& policy) {
  require_same_grid(q.q.grid(), f.grid(), "moutard_q");
  const ComplexField ratio =
      singular_ratio(mul(f, conj(f_plus)), w, policy, "moutard_q");
  return make_gaf_coefficient(add(q.q, ratio));
}

ComplexField moutard_psi(const ComplexField& psi, const ComplexField& f,
                         const ComplexField& f_plus, const OmegaPotential& w_ff,
                         const GridIndex& base, double numerator_constant_im,
                         const SingularPolicy& policy) {
  require_same_grid(psi.grid(), f.grid(), "moutard_psi");
  const OmegaPotential w_num =
      omega(psi, f_plus, OmegaMode::raw, base, numerator_constant_im);
  const ComplexField ratio =
      singular_ratio(w_num.omega, w_ff, policy, "moutard_psi");
  return sub(psi, mul(ratio, f));
}

ComplexField moutard_psi_plus(const ComplexField& psi_plus,
                              const ComplexField& f,
                              const ComplexField& f_plus,
                              const OmegaPotential& w_ff, const GridIndex& base,
                              double numerator_constant_im,
                              const SingularPolicy& policy) {
  require_same_grid(psi_plus.grid(), f.grid(), "moutard_psi_plus");
  const OmegaPotential w_num =
      omega(f, psi_plus, OmegaMode::raw, base, numerator_constant_im);
  const ComplexField ratio =
      singular_ratio(w_num.omega, w_ff, policy, "moutard_psi_plus");
  return sub(psi_plus, mul(ratio, f_plus));
}

} // namespace moutard
