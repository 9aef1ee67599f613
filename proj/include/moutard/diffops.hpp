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

#include <vector>

#include "moutard/field.hpp"

namespace moutard {

// All first derivatives are second order: central differences on interior
// points, one-sided three-point stencils on the boundary faces.

ScalarField diff_axis(const ScalarField& f, int axis);
ComplexField diff_axis(const ComplexField& f, int axis);

/// d/dz = (d/dx1 - i d/dx2) / 2 on a 2D grid. DimensionError otherwise.
ComplexField wirtinger_dz(const ComplexField& f);
ComplexField wirtinger_dz(const ScalarField& f);
/// d/dzbar = (d/dx1 + i d/dx2) / 2.
ComplexField wirtinger_dzbar(const ComplexField& f);
ComplexField wirtinger_dzbar(const ScalarField& f);

std::vector<ScalarField> gradient(const ScalarField& f);
ScalarField divergence(const std::vector<ScalarField>& v);
/// divergence(gradient(f)): the composite Laplacian shared by all residuals.
ScalarField laplacian(const ScalarField& f);

using GridIndex = std::vector<std::size_t>;

struct PathIntegral {
  ComplexField w;
  double defect; // max |W via x2-then-x1 path - W via x1-then-x2 path|
};

/// Quadrature for dW = (P+Q) dx1 + i (P-Q) dx2, i.e. the W with dz W = P and
/// dzbar W = Q when the pair is compatible. Composite trapezoid along the
/// axis-ordered path (x1 leg at the base row, then x2 legs); W(base) = 0.
/// The defect compares against the x2-then-x1 path and measures discrete
/// compatibility. 2D grids only.
PathIntegral path_integrate(const ComplexField& p, const ComplexField& q,
                            const GridIndex& base);

struct RealPathIntegral {
  ScalarField w;
  double defect;
};

/// Quadrature for dW = f1 dx1 + f2 dx2 with real integrands; same paths and
/// defect as path_integrate. Implemented via P = (f1 - i f2)/2, Q = conj(P),
/// which keeps the imaginary part exactly zero.
RealPathIntegral path_integrate_real(const ScalarField& f1,
                                     const ScalarField& f2,
                                     const GridIndex& base);

} // namespace moutard
