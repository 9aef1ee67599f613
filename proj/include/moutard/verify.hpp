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

#include <functional>
#include <optional>
#include <string>

#include "moutard/conductivity.hpp"
#include "moutard/diffops.hpp"

namespace moutard::verify {

// Residual and convergence engine. Each equation tag is the literal discrete
// transcription of its PDE using the shared second-order operators. Norms are
// taken over the evaluation set: points at least `boundary_margin` rows from
// every domain face, outside the mask dilated by `mask_halo`, and with a
// finite residual sample. The margin is 3: composite second-order operators
// reach 2 cells, and fields produced by path quadratures carry an O(h^2)
// error offset on the one-sided boundary row itself, so evaluation must not
// touch that row even through the inner flux stencil.
//
// Equation tags and the input roles they require:
//   hc1, hcm1, mdhc2 : sigma, u      div(sigma grad u)
//   conj1.3, hcm1bis : sigma, v      div(sigma^-1 grad v)
//   gan1, gan3       : q, psi        dzbar(psi) - q conj(psi)
//   gan2, gan4       : q, psi        dzbar(psi) + conj(q) conj(psi)
//   sch2             : Q, f          -lap(f) + Q f
//   ga2              : sigma, u, qpot   -div(sigma grad u) + qpot u
//   harmonic         : f             lap(f)
//   compat           : q             dzbar(q) - dz(conj q)

enum class EquationId {
  hc1,
  conj1_3,
  gan1,
  gan2,
  gan3,
  gan4,
  hcm1,
  hcm1bis,
  sch2,
  ga2,
  mdhc2,
  harmonic,
  compat
};

const char* equation_name(EquationId id);
std::optional<EquationId> parse_equation(const std::string& name);

struct ResidualInputs {
  std::optional<Conductivity> sigma;
  std::optional<ScalarField> u;
  std::optional<ScalarField> v;
  std::optional<ScalarField> Q;
  std::optional<ScalarField> qpot;
  std::optional<ScalarField> f;
  std::optional<ComplexField> q;
  std::optional<ComplexField> psi;
};

struct VerifyOptions {
  double tolerance_scale = 50.0; // tol = tolerance_scale * h^2 * max(1, scale)
  std::size_t boundary_margin = 3;
  std::size_t mask_halo = 2;
};

struct ResidualReport {
  EquationId equation;
  double norm_max = 0.0;
  double norm_l2 = 0.0; // grid-cell weighted
  double h = 0.0;
  double masked_fraction = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t points_evaluated = 0;
};

ResidualReport residual(EquationId id, const ResidualInputs& in,
                        const VerifyOptions& opts = {});

std::string to_json(const ResidualReport& r);

struct ConvergenceReport {
  EquationId equation;
  std::vector<double> spacings;
  std::vector<double> norms; // max norms
  double estimated_order = 0.0;
  bool floor_limited = false; // norms at the rounding floor; order meaningless
};

/// Runs `gen(level)` for level = 0..levels-1 (each level expected to halve
/// the spacing) and fits the max-norm decay order by least squares in
/// log-log. Norms at the differentiation rounding floor set floor_limited.
ConvergenceReport convergence_study(EquationId id,
                                    const std::function<ResidualInputs(int)>& gen,
                                    int levels, const VerifyOptions& opts = {});

std::string to_json(const ConvergenceReport& r);

/// Max |f| over points >= margin rows from every face; NaN samples skipped.
double interior_max_abs(const ScalarField& f, std::size_t margin = 3);
double interior_max_abs(const ComplexField& f, std::size_t margin = 3);

} // namespace moutard::verify
