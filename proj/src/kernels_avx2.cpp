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

#if defined(__x86_64__) || defined(_M_X64)

#include <cmath>
#include <immintrin.h>

// AVX2 kernels. No FMA: each per-element operation rounds exactly like the
// scalar reference, so outputs are bit-identical. Reductions keep the scalar
// association (max is order-free; sum_sq mirrors the 4-lane pattern).
// NaN entries are ignored by the max reductions in both variants.

namespace moutard::kernels {
namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Replace NaN lanes by zero so vmaxpd matches the scalar "skip NaN" rule.
inline __m256d zero_nan(__m256d v) {
  const __m256d ord = _mm256_cmp_pd(v, v, _CMP_ORD_Q);
  return _mm256_and_pd(v, ord);
}

void sub_scale_avx2(const double* a, const double* b, double* out,
                    std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, vc));
  }
  for (; i < n; ++i)
    out[i] = (a[i] - b[i]) * c;
}

void lincomb3_avx2(const double* a, const double* b, const double* c3,
                   double* out, std::size_t n, double ca, double cb,
                   double cc) {
  const __m256d va = _mm256_set1_pd(ca);
  const __m256d vb = _mm256_set1_pd(cb);
  const __m256d vc = _mm256_set1_pd(cc);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t1 = _mm256_mul_pd(va, _mm256_loadu_pd(a + i));
    const __m256d t2 = _mm256_mul_pd(vb, _mm256_loadu_pd(b + i));
    const __m256d t3 = _mm256_mul_pd(vc, _mm256_loadu_pd(c3 + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(t1, t2), t3));
  }
  for (; i < n; ++i)
    out[i] = ca * a[i] + cb * b[i] + cc * c3[i];
}

void add_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i)
    out[i] = a[i] + b[i];
}

void sub_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i)
    out[i] = a[i] - b[i];
}

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i)
    out[i] = a[i] * b[i];
}

void div_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i)
    out[i] = a[i] / b[i];
}

void scale_avx2(const double* a, double* out, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vc));
  for (; i < n; ++i)
    out[i] = a[i] * c;
}

void cmul_avx2(const double* a, const double* b, double* out,
               std::size_t n_cplx) {
  const std::size_t nd = 2 * n_cplx;
  std::size_t i = 0;
  for (; i + 4 <= nd; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d are = _mm256_movedup_pd(va);        // [ar ar ...]
    const __m256d aim = _mm256_permute_pd(va, 0xF);   // [ai ai ...]
    const __m256d bsw = _mm256_permute_pd(vb, 0x5);   // [bi br ...]
    const __m256d t1 = _mm256_mul_pd(are, vb);        // [ar*br ar*bi]
    const __m256d t2 = _mm256_mul_pd(aim, bsw);       // [ai*bi ai*br]
    _mm256_storeu_pd(out + i, _mm256_addsub_pd(t1, t2));
  }
  for (; i < nd; i += 2) {
    const double ar = a[i], ai = a[i + 1];
    const double br = b[i], bi = b[i + 1];
    out[i] = ar * br - ai * bi;
    out[i + 1] = ar * bi + ai * br;
  }
}

void cdiv_avx2(const double* a, const double* b, double* out,
               std::size_t n_cplx) {
  const std::size_t nd = 2 * n_cplx;
  std::size_t i = 0;
  for (; i + 4 <= nd; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d asw = _mm256_permute_pd(va, 0x5);      // [ai ar ...]
    const __m256d t1 = _mm256_mul_pd(va, vb);            // [ar*br ai*bi]
    const __m256d t2 = _mm256_mul_pd(asw, vb);           // [ai*br ar*bi]
    const __m256d bb = _mm256_mul_pd(vb, vb);            // [br^2 bi^2]
    const __m256d num_re = _mm256_hadd_pd(t1, t1);       // ar*br + ai*bi
    const __m256d num_im = _mm256_hsub_pd(t2, t2);       // ai*br - ar*bi
    const __m256d den = _mm256_hadd_pd(bb, bb);          // br^2 + bi^2
    const __m256d num = _mm256_blend_pd(num_re, num_im, 0xA);
    _mm256_storeu_pd(out + i, _mm256_div_pd(num, den));
  }
  for (; i < nd; i += 2) {
    const double ar = a[i], ai = a[i + 1];
    const double br = b[i], bi = b[i + 1];
    const double den = br * br + bi * bi;
    out[i] = (ar * br + ai * bi) / den;
    out[i + 1] = (ai * br - ar * bi) / den;
  }
}

double max_abs_avx2(const double* a, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vm = _mm256_max_pd(vm, zero_nan(abs_pd(_mm256_loadu_pd(a + i))));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vm);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double v = std::fabs(a[i]);
    if (v > m)
      m = v;
  }
  return m;
}

double max_cabs_avx2(const double* a, std::size_t n_cplx) {
  const std::size_t nd = 2 * n_cplx;
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= nd; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    const __m256d sq = _mm256_mul_pd(v, v);             // [re^2 im^2 ...]
    const __m256d s = _mm256_hadd_pd(sq, sq);           // [re^2+im^2 dup ...]
    vm = _mm256_max_pd(vm, zero_nan(s));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vm);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < nd; i += 2) {
    const double s = a[i] * a[i] + a[i + 1] * a[i + 1];
    if (s > m)
      m = s;
  }
  return std::sqrt(m);
}

double sum_sq_avx2(const double* a, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    vacc = _mm256_add_pd(vacc, _mm256_mul_pd(v, v));
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (std::size_t j = 0; i + j < n; ++j)
    acc[j] += a[i + j] * a[i + j];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

} // namespace

const KernelTable avx2_table = {
    sub_scale_avx2, lincomb3_avx2, add_avx2,      sub_avx2,
    mul_avx2,       div_avx2,      scale_avx2,    cmul_avx2,
    cdiv_avx2,      max_abs_avx2,  max_cabs_avx2, sum_sq_avx2,
};

} // namespace moutard::kernels

#endif // x86-64
