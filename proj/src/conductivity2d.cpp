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
#include "moutard/conductivity2d.hpp"

#include <cmath>
#include <limits>

#include "moutard/verify.hpp"

namespace moutard {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField sqrt_field(const ScalarField& s) {
  return map(s, [](double x) { return std::sqrt(x); });
}

ScalarField add_constant(const ScalarField& f, double c) {
  if (c == 0.0)
    return f;
  return map(f, [c](double x) { return x + c; });
}

Mask union_mask(const Grid& g, const Mask& a, const Mask& b) {
  if (a.empty())
    return b;
  if (b.empty())
    return a;
  Mask m(g.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = (a[i] || b[i]) ? 1 : 0;
  return m;
}

Conductivity make_conductivity(ScalarField sigma, Mask mask) {
  bool any = false;
  for (std::uint8_t b : mask)
    if (b) {
      any = true;
      break;
    }
  if (!any)
    return Conductivity::strict(std::move(sigma));
  return Conductivity::with_mask(std::move(sigma), std::move(mask));
}

} // namespace

ComplexField special_fplus(const Conductivity& sigma, FPlusVariant variant) {
  if (sigma.grid().dim() != 2)
    throw DimensionError("special_fplus: requires a 2D grid");
  std::vector<Complex> v(sigma.field().size());
  if (variant == FPlusVariant::R) {
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = Complex(std::sqrt(sigma.field()[i]), 0.0);
  } else {
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = Complex(0.0, 1.0 / std::sqrt(sigma.field()[i]));
  }
  return {sigma.grid(), std::move(v)};
}

ComplexField u_to_psi(const ScalarField& u, const Conductivity& sigma) {
  require_same_grid(u.grid(), sigma.grid(), "u_to_psi");
  return mul(wirtinger_dz(u), sqrt_field(sigma.field()));
}

ScalarField psi_to_u(const ComplexField& psi, const Conductivity& sigma,
                     const GridIndex& base, double value_at_base) {
  require_same_grid(psi.grid(), sigma.grid(), "psi_to_u");
  const OmegaPotential om = omega(psi, special_fplus(sigma, FPlusVariant::I),
                                  OmegaMode::raw, base, 0.0);
  // -i omega is the imaginary part of omega since Re(omega) is exactly 0.
  return add_constant(om.omega.imag_part(), value_at_base);
}

std::pair<ScalarField, ScalarField> current_density(const Conductivity& sigma,
                                                    const ScalarField& u) {
  require_same_grid(u.grid(), sigma.grid(), "current_density");
  std::vector<ScalarField> g = gradient(u);
  return {mul(sigma.field(), g[0]), mul(sigma.field(), g[1])};
}

ScalarField stream_function(const Conductivity& sigma, const ScalarField& u,
                            const GridIndex& base, double value_at_base) {
  require_same_grid(u.grid(), sigma.grid(), "stream_function");
  const OmegaPotential om =
      omega(u_to_psi(u, sigma), special_fplus(sigma, FPlusVariant::R),
            OmegaMode::raw, base, 0.0);
  return add_constant(om.omega.imag_part(), value_at_base);
}

ScalarField stream_function(const ConductivitySolution& sol,
                            const GridIndex& base, double value_at_base) {
  return stream_function(sol.sigma, sol.u, base, value_at_base);
}

ConductivitySolution make_solution(Conductivity sigma, ScalarField u,
                                   bool with_current, bool with_stream,
                                   const GridIndex& base,
                                   double stream_value_at_base) {
  ConductivitySolution sol{std::move(sigma), std::move(u), std::nullopt,
                           std::nullopt, 0.0, std::nullopt};
  {
    verify::ResidualInputs in;
    in.sigma = sol.sigma;
    in.u = sol.u;
    sol.residual_u = verify::residual(verify::EquationId::hc1, in).norm_max;
  }
  if (with_current)
    sol.current = current_density(sol.sigma, sol.u);
  if (with_stream) {
    sol.v = stream_function(sol.sigma, sol.u, base, stream_value_at_base);
    verify::ResidualInputs in;
    in.sigma = sol.sigma;
    in.v = sol.v;
    sol.residual_v = verify::residual(verify::EquationId::conj1_3, in).norm_max;
  }
  return sol;
}

ConductivityTransform2D moutard_transform_2d(const Conductivity& sigma,
                                  const TransformPlan2D& plan) {
  if (sigma.grid().dim() != 2)
    throw DimensionError("moutard_transform_2d: requires a 2D grid");
  require_same_grid(sigma.grid(), plan.seed.grid(), "moutard_transform_2d");

  GafCoefficient q = sigma_to_q(sigma);
  ComplexField f_plus = special_fplus(sigma, plan.variant);

  // Seed residual in its own equation, and f as a solution of the GAF
  // equation: f = sqrt(sigma) dz u1 for variant I, i/sqrt(sigma) dz v1 for
  // variant R.
  double seed_residual = 0.0;
  ComplexField f = [&] {
    verify::ResidualInputs in;
    in.sigma = sigma;
    if (plan.variant == FPlusVariant::I) {
      in.u = plan.seed;
      seed_residual =
          verify::residual(verify::EquationId::hc1, in).norm_max;
      return u_to_psi(plan.seed, sigma);
    }
    in.v = plan.seed;
    seed_residual =
        verify::residual(verify::EquationId::conj1_3, in).norm_max;
    const ScalarField inv_sqrt =
        map(sigma.field(), [](double s) { return 1.0 / std::sqrt(s); });
    return mul_i(mul(wirtinger_dz(plan.seed), inv_sqrt));
  }();

  const double h = sigma.grid().max_spacing();
  const bool seed_warning =
      seed_residual > 50.0 * h * h * std::max(1.0, plan.seed.max_abs());

  OmegaPotential om = omega(f, f_plus, plan.omega_mode, plan.base,
                            plan.omega_constant_im, "f", "f_plus");

  // sigma~ = -sigma omega^2 (I) or -sigma / omega^2 (R); with omega = i y
  // both reduce to positive multiples of y^2.
  const ScalarField y = om.omega.imag_part();
  Mask mask = sigma.mask();
  if (om.min_abs <= 0.0 && !plan.singular.allow)
    throw SingularOmega("moutard_transform_2d: omega_{f,f+} vanishes; enable "
                        "singular mode to mask the degenerate set");
  std::vector<double> sv(y.size());
  const double cutoff =
      plan.singular.allow ? plan.singular.rel_threshold * y.max_abs() : 0.0;
  Mask extra(plan.singular.allow ? y.size() : 0, 0);
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const double yy = y[i] * y[i];
    if (plan.singular.allow && std::fabs(y[i]) <= cutoff) {
      sv[i] = kNaN;
      extra[i] = 1;
      continue;
    }
    sv[i] = plan.variant == FPlusVariant::I ? sigma.field()[i] * yy
                                            : sigma.field()[i] / yy;
  }
  Conductivity sigma_tilde = make_conductivity(
      ScalarField(sigma.grid(), std::move(sv)),
      union_mask(sigma.grid(), mask, extra));

  GafCoefficient q_tilde = moutard_q(q, f, f_plus, om, plan.singular);

  return {std::move(sigma_tilde), std::move(q_tilde), std::move(q),
          std::move(f),           std::move(f_plus),  std::move(om),
          seed_residual,          seed_warning};
}

ComplexField transform_psi(const ConductivityTransform2D& t, const ComplexField& psi,
                              const GridIndex& base,
                              double numerator_constant_im,
                              const SingularPolicy& policy) {
  return moutard_psi(psi, t.f, t.f_plus, t.omega_ff, base,
                     numerator_constant_im, policy);
}

RecoveredPair recover_pair(const Conductivity& sigma_tilde,
                               const ComplexField& psi_tilde,
                               const GridIndex& base, double value_u,
                               double value_v) {
  ScalarField u = psi_to_u(psi_tilde, sigma_tilde, base, value_u);
  const OmegaPotential om_v =
      omega(psi_tilde, special_fplus(sigma_tilde, FPlusVariant::R),
            OmegaMode::raw, base, 0.0);
  ScalarField v = add_constant(om_v.omega.imag_part(), value_v);
  return {std::move(u), std::move(v)};
}

std::pair<Conductivity, ScalarField>
transform_MI(const Conductivity& sigma, const ScalarField& u1,
            const ScalarField& u, const SingularPolicy& policy) {
  require_same_grid(sigma.grid(), u1.grid(), "transform_MI");
  require_same_grid(sigma.grid(), u.grid(), "transform_MI");
  Mask div_mask;
  ScalarField u_tilde = guarded_div(u, u1, policy, &div_mask);
  ScalarField sigma_tilde = mul(mul(u1, u1), sigma.field());
  return {make_conductivity(std::move(sigma_tilde),
                            union_mask(sigma.grid(), sigma.mask(), div_mask)),
          std::move(u_tilde)};
}

std::pair<Conductivity, ScalarField>
transform_MR(const Conductivity& sigma, const ScalarField& v1,
            const ScalarField& v, const SingularPolicy& policy) {
  require_same_grid(sigma.grid(), v1.grid(), "transform_MR");
  require_same_grid(sigma.grid(), v.grid(), "transform_MR");
  Mask div_mask;
  ScalarField v_tilde = guarded_div(v, v1, policy, &div_mask);
  Mask sig_mask;
  ScalarField sigma_tilde =
      guarded_div(sigma.field(), mul(v1, v1), policy, &sig_mask);
  Mask m = union_mask(sigma.grid(), div_mask, sig_mask);
  return {make_conductivity(std::move(sigma_tilde),
                            union_mask(sigma.grid(), sigma.mask(), m)),
          std::move(v_tilde)};
}

namespace {

void require_harmonic(const ScalarField& f, const char* name) {
  const double h = f.grid().max_spacing();
  const double res = verify::interior_max_abs(laplacian(f), 3);
  if (res > 50.0 * h * h * std::max(1.0, f.max_abs()))
    throw PreconditionError(std::string(name) +
                            " is not harmonic to tolerance (laplacian "
                            "residual " +
                            std::to_string(res) + ")");
}

} // namespace

ConductivitySolution quadrature_solution(const ScalarField& w,
                                       const ScalarField& phi,
                                       const GridIndex& base, double c,
                                       const SingularPolicy& policy) {
  require_same_grid(w.grid(), phi.grid(), "quadrature_solution");
  if (w.grid().dim() != 2)
    throw DimensionError("quadrature_solution: requires a 2D grid");
  require_harmonic(w, "w");
  require_harmonic(phi, "phi");

  // 1-form (w phi_x2 - phi w_x2) dx1 - (w phi_x1 - phi w_x1) dx2; u is minus
  // its quadrature plus c.
  const ScalarField f1 = sub(mul(w, diff_axis(phi, 1)), mul(phi, diff_axis(w, 1)));
  const ScalarField f2 = sub(mul(phi, diff_axis(w, 0)), mul(w, diff_axis(phi, 0)));
  const RealPathIntegral integral = path_integrate_real(f1, f2, base);
  ScalarField u = map(integral.w, [c](double x) { return c - x; });

  Mask mask;
  ScalarField sigma = guarded_reciprocal(mul(w, w), policy, &mask);
  return make_solution(make_conductivity(std::move(sigma), std::move(mask)),
                       std::move(u));
}

ConductivitySolution quadrature_solution_transformed(const ScalarField& w,
                                       const ScalarField& phi1, double c1,
                                       const ScalarField& phi, double c,
                                       const GridIndex& base,
                                       const SingularPolicy& policy) {
  ConductivitySolution u1_sol = quadrature_solution(w, phi1, base, c1, policy);
  ConductivitySolution u_sol = quadrature_solution(w, phi, base, c, policy);

  Mask div_mask;
  ScalarField big_u = guarded_div(u_sol.u, u1_sol.u, policy, &div_mask);
  ScalarField sigma3 =
      mul(mul(u1_sol.u, u1_sol.u), u1_sol.sigma.field());
  Mask m = union_mask(w.grid(), u1_sol.sigma.mask(), div_mask);
  return make_solution(make_conductivity(std::move(sigma3), std::move(m)),
                       std::move(big_u));
}

} // namespace moutard
