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
#include "moutard/conductivity_nd.hpp"

#include <cmath>

#include "moutard/verify.hpp"

namespace moutard {

namespace {

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

ScalarField div_sigma_grad(const ScalarField& sigma, const ScalarField& u) {
  std::vector<ScalarField> flux = gradient(u);
  for (auto& comp : flux)
    comp = mul(sigma, comp);
  return divergence(flux);
}

} // namespace

NdTransform make_nd_transform(Conductivity sigma, ScalarField w) {
  require_same_grid(sigma.grid(), w.grid(), "make_nd_transform");
  verify::ResidualInputs in;
  in.sigma = sigma;
  in.u = w;
  const double res = verify::residual(verify::EquationId::hc1, in).norm_max;
  return {std::move(w), std::move(sigma), res};
}

std::pair<Conductivity, ScalarField>
seeded_transform(const NdTransform& t, const ScalarField& u,
                   const SingularPolicy& policy) {
  require_same_grid(t.sigma.grid(), u.grid(), "seeded_transform");
  Mask div_mask;
  ScalarField u_tilde = guarded_div(u, t.w, policy, &div_mask);
  ScalarField sigma_tilde = mul(mul(t.w, t.w), t.sigma.field());
  return {make_conductivity(std::move(sigma_tilde),
                            union_mask(t.sigma.grid(), t.sigma.mask(),
                                       div_mask)),
          std::move(u_tilde)};
}

double transform_identity_defect(const Conductivity& sigma, const ScalarField& w,
                                const ScalarField& u,
                                const SingularPolicy& policy) {
  NdTransform t = make_nd_transform(sigma, w);
  auto [sigma_tilde, u_tilde] = seeded_transform(t, u, policy);
  const ScalarField lhs = div_sigma_grad(sigma_tilde.field(), u_tilde);
  const ScalarField rhs = sub(mul(w, div_sigma_grad(sigma.field(), u)),
                              mul(u, div_sigma_grad(sigma.field(), w)));
  return verify::interior_max_abs(sub(lhs, rhs), 3);
}

NdTransform compose(const NdTransform& t2_on_transformed,
                    const NdTransform& t1) {
  require_same_grid(t1.sigma.grid(), t2_on_transformed.sigma.grid(), "compose");
  return make_nd_transform(t1.sigma, mul(t1.w, t2_on_transformed.w));
}

SchrodingerData schrodinger_Q(const Conductivity& sigma) {
  const ScalarField root =
      map(sigma.field(), [](double s) { return std::sqrt(s); });
  return {div(laplacian(root), root), sigma};
}

ScalarField to_schrodinger_psi(const ScalarField& u,
                               const Conductivity& sigma) {
  require_same_grid(u.grid(), sigma.grid(), "to_schrodinger_psi");
  return mul(map(sigma.field(), [](double s) { return std::sqrt(s); }), u);
}

double check_Q_invariance(const NdTransform& t) {
  const ScalarField sigma_tilde = mul(mul(t.w, t.w), t.sigma.field());
  Conductivity st = t.sigma.mask().empty()
                        ? Conductivity::strict(sigma_tilde)
                        : Conductivity::with_mask(sigma_tilde, t.sigma.mask());
  const SchrodingerData before = schrodinger_Q(t.sigma);
  const SchrodingerData after = schrodinger_Q(st);
  return verify::interior_max_abs(sub(after.Q, before.Q), 3);
}

GeneralizedResult generalized_transform(const Conductivity& sigma,
                                        const ScalarField& Q1,
                                        const ScalarField& Q2,
                                        const ScalarField& w,
                                        const ScalarField& u,
                                        const SingularPolicy& policy) {
  require_same_grid(sigma.grid(), Q1.grid(), "generalized_transform");
  require_same_grid(sigma.grid(), Q2.grid(), "generalized_transform");
  NdTransform t{w, sigma, 0.0};
  auto [sigma_tilde, u_tilde] = seeded_transform(t, u, policy);
  ScalarField q = mul(mul(w, w), sub(Q1, Q2));
  return {std::move(sigma_tilde), std::move(u_tilde), std::move(q)};
}

} // namespace moutard
