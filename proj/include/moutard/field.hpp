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

#include <complex>
#include <functional>
#include <vector>

#include "moutard/grid.hpp"
#include "moutard/kernels.hpp"

namespace moutard {

using Complex = std::complex<double>;

/// Real-valued samples on a Grid, row-major. Treated as immutable after
/// construction: all operations below return new fields.
class ScalarField {
public:
  ScalarField(Grid grid, std::vector<double> values);

  static ScalarField constant(const Grid& g, double c);
  static ScalarField zeros(const Grid& g) { return constant(g, 0.0); }
  /// Samples fn(point) in row-major order (deterministic).
  static ScalarField from_function(
      const Grid& g, const std::function<double(std::span<const double>)>& fn);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }

  const double* data() const { return v_.data(); }

  double max_abs() const { return kernels::table().max_abs(data(), size()); }

private:
  Grid grid_;
  std::vector<double> v_;
};

/// Complex-valued samples on a Grid, row-major, interleaved (re, im) storage.
class ComplexField {
public:
  ComplexField(Grid grid, std::vector<Complex> values);

  static ComplexField constant(const Grid& g, Complex c);
  static ComplexField zeros(const Grid& g) { return constant(g, {0.0, 0.0}); }
  static ComplexField from_function(
      const Grid& g, const std::function<Complex(std::span<const double>)>& fn);
  static ComplexField from_real(const ScalarField& re);
  static ComplexField from_parts(const ScalarField& re, const ScalarField& im);

  const Grid& grid() const { return grid_; }
  const std::vector<Complex>& values() const { return v_; }
  std::size_t size() const { return v_.size(); }
  Complex operator[](std::size_t i) const { return v_[i]; }

  // std::complex<double> is layout-compatible with double[2]
  const double* data() const { return reinterpret_cast<const double*>(v_.data()); }

  double max_abs() const { return kernels::table().max_cabs(data(), size()); }

  ScalarField real_part() const;
  ScalarField imag_part() const;

private:
  Grid grid_;
  std::vector<Complex> v_;
};

// Pointwise arithmetic; operands must share a grid (GridMismatch otherwise).
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField mul(const ScalarField& a, const ScalarField& b);
ScalarField div(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double c);
ScalarField map(const ScalarField& a, const std::function<double(double)>& f);

ComplexField add(const ComplexField& a, const ComplexField& b);
ComplexField sub(const ComplexField& a, const ComplexField& b);
ComplexField mul(const ComplexField& a, const ComplexField& b);
ComplexField div(const ComplexField& a, const ComplexField& b);
ComplexField scale(const ComplexField& a, double c);
ComplexField conj(const ComplexField& a);
/// Pointwise multiplication by i (exact swap/negate).
ComplexField mul_i(const ComplexField& a);
ComplexField neg(const ComplexField& a);
/// Complex * real, pointwise.
ComplexField mul(const ComplexField& a, const ScalarField& b);

double max_abs_diff(const ScalarField& a, const ScalarField& b);
double max_abs_diff(const ComplexField& a, const ComplexField& b);

} // namespace moutard
