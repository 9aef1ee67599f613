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
#include <vector>

#include "moutard/gaf.hpp"

namespace moutard {

// 2D conductivity reductions: the q <-> sigma dictionary lives in gaf.hpp;
// here are the special conjugate solutions, the potential <-> GAF solution
// maps, stream functions, the full transform pipeline for (sigma, u, v), the
// explicit M_I / M_R forms, and the integrable closed-form families.

enum class FPlusVariant { R, I };

/// f+_R = sqrt(sigma), f+_I = i / sqrt(sigma); both solve the conjugate GAF
/// equation for q = -1/2 dz log(sigma).
ComplexField special_fplus(const Conductivity& sigma, FPlusVariant variant);

/// psi = sqrt(sigma) dz u.
ComplexField u_to_psi(const ScalarField& u, const Conductivity& sigma);

/// u = -i omega_{psi, f+_I} + value_at_base; inverse of u_to_psi up to O(h^2).
ScalarField psi_to_u(const ComplexField& psi, const Conductivity& sigma,
                     const GridIndex& base, double value_at_base);

/// Current density I = sigma grad u.
std::pair<ScalarField, ScalarField> current_density(const Conductivity& sigma,
                                                    const ScalarField& u);

/// Stream function: v = -i omega_{psi, f+_R} + value_at_base, so that
/// d_x2 v = I1 and -d_x1 v = I2 up to O(h^2).
ScalarField stream_function(const Conductivity& sigma, const ScalarField& u,
                            const GridIndex& base, double value_at_base);

/// A (sigma, u) pair with optional stream function and current, plus max-norm
/// residuals of their equations over the evaluation set.
struct ConductivitySolution {
  Conductivity sigma;
  ScalarField u;
  std::optional<ScalarField> v;
  std::optional<std::pair<ScalarField, ScalarField>> current;
  double residual_u = 0.0;
  std::optional<double> residual_v;
};

ConductivitySolution make_solution(Conductivity sigma, ScalarField u,
                                   bool with_current = false,
                                   bool with_stream = false,
                                   const GridIndex& base = {0, 0},
                                   double stream_value_at_base = 0.0);

ScalarField stream_function(const ConductivitySolution& sol,
                            const GridIndex& base, double value_at_base);

struct TransformPlan2D {
  FPlusVariant variant;
  /// Fixed solution generating f: u1 solving div(sigma grad u1) = 0 for
  /// variant I, v1 solving div(sigma^-1 grad v1) = 0 for variant R.
  ScalarField seed;
  OmegaMode omega_mode;
  std::optional<double> omega_constant_im; // overrides omega_mode
  GridIndex base;
  SingularPolicy singular;

  TransformPlan2D(FPlusVariant variant_, ScalarField seed_,
                  OmegaMode omega_mode_ = OmegaMode::nonvanishing,
                  std::optional<double> omega_constant_im_ = std::nullopt,
                  GridIndex base_ = {0, 0}, SingularPolicy singular_ = {})
      : variant(variant_), seed(std::move(seed_)), omega_mode(omega_mode_),
        omega_constant_im(omega_constant_im_), base(std::move(base_)),
        singular(singular_) {}
};

struct ConductivityTransform2D {
  Conductivity sigma_tilde;
  GafCoefficient q_tilde;
  GafCoefficient q;       // coefficient of the input sigma
  ComplexField f;         // fixed GAF solution derived from the seed
  ComplexField f_plus;    // special conjugate solution used
  OmegaPotential omega_ff;
  double seed_residual;   // max-norm residual of the seed in its equation
  bool seed_warning;
};

/// sigma~ = -sigma / omega^2 (variant R) or -sigma omega^2 (variant I);
/// q~ = q + f conj(f+) / omega satisfies q~ = -1/2 dz log(sigma~) to O(h^2).
ConductivityTransform2D moutard_transform_2d(const Conductivity& sigma,
                                  const TransformPlan2D& plan);

/// Maps an arbitrary GAF solution through the transform of `t`:
/// psi~ = psi - (omega_{psi,f+} / omega_{f,f+}) f.
ComplexField transform_psi(const ConductivityTransform2D& t, const ComplexField& psi,
                              const GridIndex& base,
                              double numerator_constant_im = 0.0,
                              const SingularPolicy& policy = {});

struct RecoveredPair {
  ScalarField u;
  ScalarField v;
};

/// u~ = -i omega_{psi~, i/sqrt(sigma~)}, v~ = -i omega_{psi~, sqrt(sigma~)}.
RecoveredPair recover_pair(const Conductivity& sigma_tilde,
                               const ComplexField& psi_tilde,
                               const GridIndex& base, double value_u = 0.0,
                               double value_v = 0.0);

/// M_I: (u1^2 sigma, u / u1), u1 and u solutions of the conductivity equation.
std::pair<Conductivity, ScalarField>
transform_MI(const Conductivity& sigma, const ScalarField& u1,
            const ScalarField& u, const SingularPolicy& policy = {});

/// M_R: (v1^-2 sigma, v / v1), v1 and v solutions of the conjugate equation.
std::pair<Conductivity, ScalarField>
transform_MR(const Conductivity& sigma, const ScalarField& v1,
            const ScalarField& v, const SingularPolicy& policy = {});

/// Integrable family sigma = w^-2 (w harmonic): u is the quadrature of the
/// antisymmetric 1-form built from w and a second harmonic phi, plus c.
/// Non-harmonic inputs throw PreconditionError.
ConductivitySolution quadrature_solution(const ScalarField& w,
                                         const ScalarField& phi,
                                         const GridIndex& base, double c,
                                         const SingularPolicy& policy = {});

/// Integrable family sigma = w^-2 u1^2 with u1 the quadrature solution for
/// (w, phi1, c1); returns U = u1^-1 u with u the quadrature solution for
/// (w, phi, c).
ConductivitySolution quadrature_solution_transformed(
    const ScalarField& w, const ScalarField& phi1, double c1,
    const ScalarField& phi, double c, const GridIndex& base,
    const SingularPolicy& policy = {});

} // namespace moutard
