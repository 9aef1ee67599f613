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
#include "moutard/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace moutard {

Grid::Grid(std::vector<double> origin, std::vector<double> spacing,
           std::vector<std::size_t> shape)
    : origin_(std::move(origin)), spacing_(std::move(spacing)),
      shape_(std::move(shape)) {
  if (shape_.empty())
    throw DimensionError("Grid: dimension must be >= 1");
  if (origin_.size() != shape_.size() || spacing_.size() != shape_.size())
    throw DimensionError("Grid: origin/spacing/shape lengths differ");
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    if (!(spacing_[k] > 0.0) || !std::isfinite(spacing_[k]))
      throw Error("Grid: spacing must be strictly positive (axis " +
                  std::to_string(k) + ")");
    if (shape_[k] < 3)
      throw Error("Grid: need at least 3 points per axis (axis " +
                  std::to_string(k) + ")");
    if (!std::isfinite(origin_[k]))
      throw Error("Grid: origin must be finite");
  }
  strides_.assign(shape_.size(), 1);
  for (std::size_t k = shape_.size(); k-- > 1;)
    strides_[k - 1] = strides_[k] * shape_[k];
  size_ = strides_[0] * shape_[0];
}

std::vector<double> Grid::point(std::span<const std::size_t> idx) const {
  std::vector<double> p(shape_.size());
  for (std::size_t k = 0; k < shape_.size(); ++k)
    p[k] = coord(static_cast<int>(k), idx[k]);
  return p;
}

std::size_t Grid::flatten(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape_.size(); ++k)
    flat += idx[k] * strides_[k];
  return flat;
}

void Grid::unflatten(std::size_t flat, std::span<std::size_t> idx) const {
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
}

double Grid::max_spacing() const {
  return *std::max_element(spacing_.begin(), spacing_.end());
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (double h : spacing_)
    v *= h;
  return v;
}

std::size_t Grid::boundary_distance(std::size_t flat) const {
  std::size_t d = SIZE_MAX;
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    const std::size_t i = flat / strides_[k] % shape_[k];
    d = std::min(d, std::min(i, shape_[k] - 1 - i));
  }
  return d;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b)
    throw GridMismatch(std::string(where) + ": fields live on different grids");
}

} // namespace moutard
