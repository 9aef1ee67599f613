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

#include <cstdlib>
#include <cstring>

namespace moutard::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

Backend resolve_backend() {
  const char* env = std::getenv("MOUTARD_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0)
      return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0)
      return avx2_supported() ? Backend::avx2 : Backend::scalar;
    // anything else, including "auto", falls through
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

} // namespace

Backend active_backend() {
  static const Backend b = resolve_backend();
  return b;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

const KernelTable& table(Backend b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2)
    return avx2_table;
#endif
  (void)b;
  return scalar_table;
}

const KernelTable& table() { return table(active_backend()); }

} // namespace moutard::kernels
