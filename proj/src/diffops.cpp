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
#include "moutard/diffops.hpp"

#include <string>

namespace moutard {

namespace {

// First derivative along `axis` on interleaved data with ncomp doubles per
// grid point. The whole interior of a block is one sub_scale call; the two
// boundary slabs are one lincomb3 call each.
void diff_axis_raw(const Grid& g, const double* in, double* out, int axis,
                   std::size_t ncomp) {
  const std::size_t n = g.shape()[static_cast<std::size_t>(axis)];
  const std::size_t inner = g.stride(axis) * ncomp;
  const std::size_t block = n * inner;
  const std::size_t outer = g.size() * ncomp / block;
  const double c = 1.0 / (2.0 * g.spacing()[static_cast<std::size_t>(axis)]);
  const auto& K = kernels::table();
  for (std::size_t o = 0; o < outer; ++o) {
    const double* bi = in + o * block;
    double* bo = out + o * block;
    if (block > 2 * inner)
      K.sub_scale(bi + 2 * inner, bi, bo + inner, block - 2 * inner, c);
    // (-3 f0 + 4 f1 - f2) / (2h)
    K.lincomb3(bi, bi + inner, bi + 2 * inner, bo, inner, -3.0 * c, 4.0 * c,
               -1.0 * c);
    // (3 f_{n-1} - 4 f_{n-2} + f_{n-3}) / (2h)
    const double* e = bi + (n - 1) * inner;
    K.lincomb3(e, e - inner, e - 2 * inner, bo + (n - 1) * inner, inner,
               3.0 * c, -4.0 * c, 1.0 * c);
  }
}

void require_dim2(const Grid& g, const char* where) {
  if (g.dim() != 2)
    throw DimensionError(std::string(where) + ": requires a 2D grid, got d=" +
                         std::to_string(g.dim()));
}

} // namespace

ScalarField diff_axis(const ScalarField& f, int axis) {
  std::vector<double> out(f.size());
  diff_axis_raw(f.grid(), f.data(), out.data(), axis, 1);
  return {f.grid(), std::move(out)};
}

ComplexField diff_axis(const ComplexField& f, int axis) {
  std::vector<Complex> out(f.size());
  diff_axis_raw(f.grid(), f.data(), reinterpret_cast<double*>(out.data()), axis,
                2);
  return {f.grid(), std::move(out)};
}

namespace {

// sign = -1 for dz, +1 for dzbar; combination written so that the
// conjugation rule dzbar(conj F) == conj(dz F) holds bit-exactly.
ComplexField wirtinger_combine(const ComplexField& d1, const ComplexField& d2,
                               double sign) {
  std::vector<Complex> out(d1.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    const Complex a = d1[i], b = d2[i];
    out[i] = Complex(0.5 * (a.real() - sign * b.imag()),
                     0.5 * (a.imag() + sign * b.real()));
  }
  return {d1.grid(), std::move(out)};
}

} // namespace

ComplexField wirtinger_dz(const ComplexField& f) {
  require_dim2(f.grid(), "wirtinger_dz");
  return wirtinger_combine(diff_axis(f, 0), diff_axis(f, 1), -1.0);
}

ComplexField wirtinger_dzbar(const ComplexField& f) {
  require_dim2(f.grid(), "wirtinger_dzbar");
  return wirtinger_combine(diff_axis(f, 0), diff_axis(f, 1), 1.0);
}

ComplexField wirtinger_dz(const ScalarField& f) {
  require_dim2(f.grid(), "wirtinger_dz");
  const ScalarField d1 = diff_axis(f, 0);
  const ScalarField d2 = diff_axis(f, 1);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = Complex(0.5 * d1[i], -0.5 * d2[i]);
  return {f.grid(), std::move(out)};
}

ComplexField wirtinger_dzbar(const ScalarField& f) {
  require_dim2(f.grid(), "wirtinger_dzbar");
  const ScalarField d1 = diff_axis(f, 0);
  const ScalarField d2 = diff_axis(f, 1);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = Complex(0.5 * d1[i], 0.5 * d2[i]);
  return {f.grid(), std::move(out)};
}

std::vector<ScalarField> gradient(const ScalarField& f) {
  std::vector<ScalarField> g;
  g.reserve(static_cast<std::size_t>(f.grid().dim()));
  for (int k = 0; k < f.grid().dim(); ++k)
    g.push_back(diff_axis(f, k));
  return g;
}

ScalarField divergence(const std::vector<ScalarField>& v) {
  if (v.empty())
    throw DimensionError("divergence: empty component list");
  if (static_cast<int>(v.size()) != v[0].grid().dim())
    throw DimensionError("divergence: component count must equal grid dim");
  for (const auto& c : v)
    require_same_grid(v[0].grid(), c.grid(), "divergence");
  ScalarField out = diff_axis(v[0], 0);
  for (std::size_t k = 1; k < v.size(); ++k)
    out = add(out, diff_axis(v[k], static_cast<int>(k)));
  return out;
}

ScalarField laplacian(const ScalarField& f) { return divergence(gradient(f)); }

namespace {

// Cumulative trapezoid of `integrand` along `axis` through the pinned index,
// sweeping away from base in both directions. Writes only the line through
// `fixed`; callers then extend along the other axis.
void trapezoid_line(const Grid& g, const std::vector<Complex>& integrand,
                    std::vector<Complex>& w, int axis, std::size_t base_on_axis,
                    std::size_t fixed_flat) {
  const std::size_t n = g.shape()[static_cast<std::size_t>(axis)];
  const std::size_t s = g.stride(axis);
  const double half_h = 0.5 * g.spacing()[static_cast<std::size_t>(axis)];
  for (std::size_t j = base_on_axis; j + 1 < n; ++j) {
    const std::size_t at = fixed_flat + j * s;
    w[at + s] = w[at] + half_h * (integrand[at] + integrand[at + s]);
  }
  for (std::size_t j = base_on_axis; j > 0; --j) {
    const std::size_t at = fixed_flat + j * s;
    w[at - s] = w[at] - half_h * (integrand[at] + integrand[at - s]);
  }
}

// Integrates A dx1 + B dx2 from base, legs ordered first_axis then the other.
std::vector<Complex> integrate_ordered(const Grid& g,
                                       const std::vector<Complex>& a,
                                       const std::vector<Complex>& b,
                                       const GridIndex& base, int first_axis) {
  std::vector<Complex> w(g.size(), Complex(0.0, 0.0));
  const int second_axis = 1 - first_axis;
  const std::vector<Complex>& first_integrand = first_axis == 0 ? a : b;
  const std::vector<Complex>& second_integrand = first_axis == 0 ? b : a;
  const std::size_t sfix = g.stride(second_axis);
  // leg 1: along first_axis at the base value of the other axis
  trapezoid_line(g, first_integrand, w, first_axis,
                 base[static_cast<std::size_t>(first_axis)],
                 base[static_cast<std::size_t>(second_axis)] * sfix);
  // leg 2: along second_axis from every point of leg 1
  const std::size_t nfirst = g.shape()[static_cast<std::size_t>(first_axis)];
  const std::size_t sfirst = g.stride(first_axis);
  for (std::size_t i = 0; i < nfirst; ++i)
    trapezoid_line(g, second_integrand, w, second_axis,
                   base[static_cast<std::size_t>(second_axis)], i * sfirst);
  return w;
}

} // namespace

PathIntegral path_integrate(const ComplexField& p, const ComplexField& q,
                            const GridIndex& base) {
  require_dim2(p.grid(), "path_integrate");
  require_same_grid(p.grid(), q.grid(), "path_integrate");
  const Grid& g = p.grid();
  if (base.size() != 2 || base[0] >= g.shape()[0] || base[1] >= g.shape()[1])
    throw Error("path_integrate: base index out of range");

  const ComplexField a = add(p, q);
  const ComplexField b = mul_i(sub(p, q));

  std::vector<Complex> w = integrate_ordered(g, a.values(), b.values(), base, 0);
  const std::vector<Complex> walt =
      integrate_ordered(g, a.values(), b.values(), base, 1);

  double defect = 0.0;
  {
    std::vector<Complex> d(g.size());
    const auto& K = kernels::table();
    K.sub(reinterpret_cast<const double*>(walt.data()),
          reinterpret_cast<const double*>(w.data()),
          reinterpret_cast<double*>(d.data()), 2 * g.size());
    defect = K.max_cabs(reinterpret_cast<const double*>(d.data()), g.size());
  }
  return {ComplexField(g, std::move(w)), defect};
}

RealPathIntegral path_integrate_real(const ScalarField& f1,
                                     const ScalarField& f2,
                                     const GridIndex& base) {
  require_same_grid(f1.grid(), f2.grid(), "path_integrate_real");
  std::vector<Complex> pv(f1.size());
  std::vector<Complex> qv(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    pv[i] = Complex(0.5 * f1[i], -0.5 * f2[i]);
    qv[i] = Complex(0.5 * f1[i], 0.5 * f2[i]);
  }
  PathIntegral pi = path_integrate(ComplexField(f1.grid(), std::move(pv)),
                                   ComplexField(f1.grid(), std::move(qv)), base);
  return {pi.w.real_part(), pi.defect};
}

} // namespace moutard
