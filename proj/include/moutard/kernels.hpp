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

#include <cstddef>

namespace moutard::kernels {

// Data-parallel inner loops behind all field arithmetic. Every kernel has a
// scalar reference implementation and (on x86-64) an AVX2 variant selected
// once at startup. The two variants are bit-identical: elementwise kernels
// apply the same IEEE operations per lane (no FMA contraction anywhere), the
// max reductions are associative, and sum_sq uses a fixed four-accumulator
// association in both variants.
//
// Complex arrays are interleaved (re, im) pairs; n_cplx counts pairs.
struct KernelTable {
  // out[i] = (a[i] - b[i]) * c
  void (*sub_scale)(const double* a, const double* b, double* out,
                    std::size_t n, double c);
  // out[i] = ca*a[i] + cb*b[i] + cc*c3[i]
  void (*lincomb3)(const double* a, const double* b, const double* c3,
                   double* out, std::size_t n, double ca, double cb, double cc);
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*div)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = a[i] * c
  void (*scale)(const double* a, double* out, std::size_t n, double c);
  // complex product: (ar*br - ai*bi, ar*bi + ai*br)
  void (*cmul)(const double* a, const double* b, double* out,
               std::size_t n_cplx);
  // complex quotient: ((ar*br + ai*bi)/d, (ai*br - ar*bi)/d), d = br^2 + bi^2
  void (*cdiv)(const double* a, const double* b, double* out,
               std::size_t n_cplx);
  double (*max_abs)(const double* a, std::size_t n);
  // max modulus over complex entries (sqrt of max of re^2 + im^2)
  double (*max_cabs)(const double* a, std::size_t n_cplx);
  // sum of squares, fixed 4-lane association: (s0+s1) + (s2+s3)
  double (*sum_sq)(const double* a, std::size_t n);
};

enum class Backend { scalar, avx2 };

/// True when the running CPU supports AVX2 and the avx2 variant was built.
bool avx2_supported();

/// Backend selected at startup: MOUTARD_KERNELS=scalar|avx2|auto (default
/// auto picks avx2 when supported).
Backend active_backend();
const char* backend_name(Backend b);

const KernelTable& table();          // active backend
const KernelTable& table(Backend b); // explicit backend (tests)

extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif

} // namespace moutard::kernels
