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
#include "moutard/kernels.hpp"

#include <cmath>

// Scalar reference kernels. The AVX2 variants must reproduce these bit for
// bit; keep the per-element expressions and the sum_sq accumulation pattern
// in sync with kernels_avx2.cpp.

namespace moutard::kernels {
namespace {

void sub_scale_scalar(const double* a, const double* b, double* out,
                      std::size_t n, double c) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (a[i] - b[i]) * c;
}

void lincomb3_scalar(const double* a, const double* b, const double* c3,
                     double* out, std::size_t n, double ca, double cb,
                     double cc) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = ca * a[i] + cb * b[i] + cc * c3[i];
}

void add_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i] + b[i];
}

void sub_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i] - b[i];
}

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i] * b[i];
}

void div_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i] / b[i];
}

void scale_scalar(const double* a, double* out, std::size_t n, double c) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i] * c;
}

void cmul_scalar(const double* a, const double* b, double* out,
                 std::size_t n_cplx) {
  for (std::size_t i = 0; i < n_cplx; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    out[2 * i] = ar * br - ai * bi;
    out[2 * i + 1] = ar * bi + ai * br;
  }
}

void cdiv_scalar(const double* a, const double* b, double* out,
                 std::size_t n_cplx) {
  for (std::size_t i = 0; i < n_cplx; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    const double den = br * br + bi * bi;
    out[2 * i] = (ar * br + ai * bi) / den;
    out[2 * i + 1] = (ai * br - ar * bi) / den;
  }
}

double max_abs_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(a[i]);
    if (v > m)
      m = v;
  }
  return m;
}

double max_cabs_scalar(const double* a, std::size_t n_cplx) {
  double m = 0.0;
  for (std::size_t i = 0; i < n_cplx; ++i) {
    const double re = a[2 * i], im = a[2 * i + 1];
    const double s = re * re + im * im;
    if (s > m)
      m = s;
  }
  return std::sqrt(m);
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += a[i] * a[i];
    acc[1] += a[i + 1] * a[i + 1];
    acc[2] += a[i + 2] * a[i + 2];
    acc[3] += a[i + 3] * a[i + 3];
  }
  for (std::size_t j = 0; i + j < n; ++j)
    acc[j] += a[i + j] * a[i + j];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

} // namespace

const KernelTable scalar_table = {
    sub_scale_scalar, lincomb3_scalar, add_scalar,      sub_scalar,
    mul_scalar,       div_scalar,      scale_scalar,    cmul_scalar,
    cdiv_scalar,      max_abs_scalar,  max_cabs_scalar, sum_sq_scalar,
};

} // namespace moutard::kernels
