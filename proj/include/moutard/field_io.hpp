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

#include <string>
#include <variant>

#include "moutard/field.hpp"

namespace moutard {

// Text field files:
//   # grid d=<d> origin=<v,...> spacing=<v,...> shape=<n,...> kind=<real|complex>
// followed by one line per point in row-major order, `re` or `re,im`, printed
// with 17 significant digits so that write -> read -> write is bit-identical.

void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const ComplexField& f);

std::string format_field(const ScalarField& f);
std::string format_field(const ComplexField& f);

using AnyField = std::variant<ScalarField, ComplexField>;

AnyField read_field(const std::string& path);
AnyField parse_field(const std::string& text, const std::string& origin_name);

ScalarField read_scalar_field(const std::string& path);
ComplexField read_complex_field(const std::string& path);

} // namespace moutard
