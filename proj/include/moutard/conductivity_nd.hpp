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

#include <utility>

#include "moutard/conductivity.hpp"
#include "moutard/diffops.hpp"

namespace moutard {

/// Seeded transform for any dimension d >= 1: sigma~ = w^2 sigma,
/// u~ = u / w, with w a fixed solution of div(sigma grad w) = 0.
struct NdTransform {
  ScalarField w;
  Conductivity sigma;
  double residual_w = 0.0; // max |div(sigma grad w)| over the evaluation set
};

NdTransform make_nd_transform(Conductivity sigma, ScalarField w);

std::pair<Conductivity, ScalarField>
seeded_transform(const NdTransform& t, const ScalarField& u,
                   const SingularPolicy& policy = {});

/// Max over the interior evaluation set of
/// |div(sigma~ grad u~) - (w div(sigma grad u) - u div(sigma grad w))|,
/// which vanishes identically at the continuum for any smooth inputs.
double transform_identity_defect(const Conductivity& sigma, const ScalarField& w,
                                const ScalarField& u,
                                const SingularPolicy& policy = {});

/// Composite transform: applying t1 and then t2 (whose seed lives on the
/// transformed system) equals the returned single transform with seed
/// t1.w * t2.w.
NdTransform compose(const NdTransform& t2_on_transformed,
                    const NdTransform& t1);

struct SchrodingerData {
  ScalarField Q; // lap(sqrt(sigma)) / sqrt(sigma)
  Conductivity sigma_source;
};

SchrodingerData schrodinger_Q(const Conductivity& sigma);

/// The substitution psi = sqrt(sigma) u mapping conductivity solutions to
/// zero-energy Schrodinger solutions.
ScalarField to_schrodinger_psi(const ScalarField& u, const Conductivity& sigma);

/// Max |Q(sigma~) - Q(sigma)| over the evaluation set (sigma~ = w^2 sigma).
double check_Q_invariance(const NdTransform& t);

struct GeneralizedResult {
  Conductivity sigma_tilde; // w^2 sigma
  ScalarField u_tilde;      // u / w
  ScalarField q;            // w^2 (Q1 - Q2)
};

/// Transform between the generalized equations
/// -div(sigma grad u) + Q1 u = 0 and -div(sigma~ grad u~) + q u~ = 0,
/// where w solves -div(sigma grad w) + Q2 w = 0. The (sigma~, u~) pair is
/// computed by the same kernel as seeded_transform.
GeneralizedResult generalized_transform(const Conductivity& sigma,
                                        const ScalarField& Q1,
                                        const ScalarField& Q2,
                                        const ScalarField& w,
                                        const ScalarField& u,
                                        const SingularPolicy& policy = {});

} // namespace moutard
