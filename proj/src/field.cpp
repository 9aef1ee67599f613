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
#include "moutard/field.hpp"

#include <cmath>

namespace moutard {

namespace {

// Iterates multi-indices in row-major order, producing point coordinates.
template <typename F>
void for_each_point(const Grid& g, F&& fn) {
  const int d = g.dim();
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> p(static_cast<std::size_t>(d));
  const std::size_t n = g.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    for (int k = 0; k < d; ++k)
      p[static_cast<std::size_t>(k)] =
          g.coord(k, idx[static_cast<std::size_t>(k)]);
    fn(flat, std::span<const double>(p));
    for (int k = d; k-- > 0;) {
      auto& ik = idx[static_cast<std::size_t>(k)];
      if (++ik < g.shape()[static_cast<std::size_t>(k)])
        break;
      ik = 0;
    }
  }
}

} // namespace

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
  if (v_.size() != grid_.size())
    throw GridMismatch("ScalarField: values length does not match grid size");
}

ScalarField ScalarField::constant(const Grid& g, double c) {
  return {g, std::vector<double>(g.size(), c)};
}

ScalarField ScalarField::from_function(
    const Grid& g, const std::function<double(std::span<const double>)>& fn) {
  std::vector<double> v(g.size());
  for_each_point(g, [&](std::size_t flat, std::span<const double> p) { v[flat] = fn(p); });
  return {g, std::move(v)};
}

ComplexField::ComplexField(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
  if (v_.size() != grid_.size())
    throw GridMismatch("ComplexField: values length does not match grid size");
}

ComplexField ComplexField::constant(const Grid& g, Complex c) {
  return {g, std::vector<Complex>(g.size(), c)};
}

ComplexField ComplexField::from_function(
    const Grid& g, const std::function<Complex(std::span<const double>)>& fn) {
  std::vector<Complex> v(g.size());
  for_each_point(g, [&](std::size_t flat, std::span<const double> p) { v[flat] = fn(p); });
  return {g, std::move(v)};
}

ComplexField ComplexField::from_real(const ScalarField& re) {
  std::vector<Complex> v(re.size());
  for (std::size_t i = 0; i < re.size(); ++i)
    v[i] = Complex(re[i], 0.0);
  return {re.grid(), std::move(v)};
}

ComplexField ComplexField::from_parts(const ScalarField& re, const ScalarField& im) {
  require_same_grid(re.grid(), im.grid(), "ComplexField::from_parts");
  std::vector<Complex> v(re.size());
  for (std::size_t i = 0; i < re.size(); ++i)
    v[i] = Complex(re[i], im[i]);
  return {re.grid(), std::move(v)};
}

ScalarField ComplexField::real_part() const {
  std::vector<double> v(size());
  for (std::size_t i = 0; i < size(); ++i)
    v[i] = v_[i].real();
  return {grid_, std::move(v)};
}

ScalarField ComplexField::imag_part() const {
  std::vector<double> v(size());
  for (std::size_t i = 0; i < size(); ++i)
    v[i] = v_[i].imag();
  return {grid_, std::move(v)};
}

namespace {

using BinKernel = void (*)(const double*, const double*, double*, std::size_t);

ScalarField bin_op(const ScalarField& a, const ScalarField& b, BinKernel k,
                   const char* where) {
  require_same_grid(a.grid(), b.grid(), where);
  std::vector<double> out(a.size());
  k(a.data(), b.data(), out.data(), a.size());
  return {a.grid(), std::move(out)};
}

// Complex add/sub act componentwise on the interleaved storage.
ComplexField bin_op_c(const ComplexField& a, const ComplexField& b, BinKernel k,
                      const char* where) {
  require_same_grid(a.grid(), b.grid(), where);
  std::vector<Complex> out(a.size());
  k(a.data(), b.data(), reinterpret_cast<double*>(out.data()), 2 * a.size());
  return {a.grid(), std::move(out)};
}

} // namespace

ScalarField add(const ScalarField& a, const ScalarField& b) {
  return bin_op(a, b, kernels::table().add, "add");
}
ScalarField sub(const ScalarField& a, const ScalarField& b) {
  return bin_op(a, b, kernels::table().sub, "sub");
}
ScalarField mul(const ScalarField& a, const ScalarField& b) {
  return bin_op(a, b, kernels::table().mul, "mul");
}
ScalarField div(const ScalarField& a, const ScalarField& b) {
  return bin_op(a, b, kernels::table().div, "div");
}

ScalarField scale(const ScalarField& a, double c) {
  std::vector<double> out(a.size());
  kernels::table().scale(a.data(), out.data(), a.size(), c);
  return {a.grid(), std::move(out)};
}

ScalarField map(const ScalarField& a, const std::function<double(double)>& f) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = f(a[i]);
  return {a.grid(), std::move(out)};
}

ComplexField add(const ComplexField& a, const ComplexField& b) {
  return bin_op_c(a, b, kernels::table().add, "add");
}
ComplexField sub(const ComplexField& a, const ComplexField& b) {
  return bin_op_c(a, b, kernels::table().sub, "sub");
}

ComplexField mul(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid(), "mul");
  std::vector<Complex> out(a.size());
  kernels::table().cmul(a.data(), b.data(), reinterpret_cast<double*>(out.data()),
                        a.size());
  return {a.grid(), std::move(out)};
}

ComplexField div(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid(), "div");
  std::vector<Complex> out(a.size());
  kernels::table().cdiv(a.data(), b.data(), reinterpret_cast<double*>(out.data()),
                        a.size());
  return {a.grid(), std::move(out)};
}

ComplexField scale(const ComplexField& a, double c) {
  std::vector<Complex> out(a.size());
  kernels::table().scale(a.data(), reinterpret_cast<double*>(out.data()),
                         2 * a.size(), c);
  return {a.grid(), std::move(out)};
}

ComplexField conj(const ComplexField& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = Complex(a[i].real(), -a[i].imag());
  return {a.grid(), std::move(out)};
}

ComplexField mul_i(const ComplexField& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = Complex(-a[i].imag(), a[i].real());
  return {a.grid(), std::move(out)};
}

ComplexField neg(const ComplexField& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = Complex(-a[i].real(), -a[i].imag());
  return {a.grid(), std::move(out)};
}

ComplexField mul(const ComplexField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "mul");
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = Complex(a[i].real() * b[i], a[i].imag() * b[i]);
  return {a.grid(), std::move(out)};
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  return sub(a, b).max_abs();
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  return sub(a, b).max_abs();
}

} // namespace moutard
