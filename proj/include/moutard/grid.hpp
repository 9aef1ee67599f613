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
#include <span>
#include <vector>

#include "moutard/errors.hpp"

namespace moutard {

/// Uniform rectangular sampling of a box in R^d.
///
/// Points are stored in row-major multi-index order: the last axis varies
/// fastest. point(i) = origin + i * spacing componentwise, evaluated the
/// same way every time (bit-reproducible).
class Grid {
public:
  Grid(std::vector<double> origin, std::vector<double> spacing,
       std::vector<std::size_t> shape);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<std::size_t>& shape() const { return shape_; }

  std::size_t size() const { return size_; }

  /// Elements between consecutive indices along `axis`.
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  double coord(int axis, std::size_t i) const {
    return origin_[static_cast<std::size_t>(axis)] +
           static_cast<double>(i) * spacing_[static_cast<std::size_t>(axis)];
  }

  std::vector<double> point(std::span<const std::size_t> idx) const;

  std::size_t flatten(std::span<const std::size_t> idx) const;
  void unflatten(std::size_t flat, std::span<std::size_t> idx) const;

  /// Largest spacing over all axes; the representative h for tolerances.
  double max_spacing() const;
  /// Volume of one grid cell, prod of spacings.
  double cell_volume() const;

  /// Chebyshev distance from the multi-index of `flat` to the domain
  /// boundary (0 on a boundary face).
  std::size_t boundary_distance(std::size_t flat) const;

  bool operator==(const Grid& other) const {
    return origin_ == other.origin_ && spacing_ == other.spacing_ &&
           shape_ == other.shape_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

private:
  std::vector<double> origin_;
  std::vector<double> spacing_;
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Throws GridMismatch unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

} // namespace moutard
