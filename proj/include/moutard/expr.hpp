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

#include <memory>
#include <string>

#include "moutard/field.hpp"

namespace moutard {

// Arithmetic expressions over grid coordinates x1..x9 with +, -, *, /, ^
// (right associative), parentheses, numeric literals, the constants pi and e,
// unary functions exp, log, sin, cos, tan, sinh, cosh, tanh, sqrt, abs, erf,
// and binary functions pow, min, max. ParseError carries the column of the
// offending token.

class Expression {
public:
  static Expression parse(const std::string& text);

  double eval(std::span<const double> point) const;

  /// Highest coordinate index used (1-based); 0 when constant.
  int max_variable() const { return max_var_; }

  const std::string& text() const { return text_; }

  /// Samples the expression on a grid. Throws DimensionError when the
  /// expression uses a coordinate beyond the grid dimension.
  ScalarField sample(const Grid& g) const;

  struct Node;

private:
  Expression(std::shared_ptr<const Node> root, int max_var, std::string text);

  std::shared_ptr<const Node> root_;
  int max_var_ = 0;
  std::string text_;
};

} // namespace moutard
