#pragma once

// Discrete L2([0,1]) geometry on a fixed equidistant grid.
//
// A function is its vector of values on the grid; the inner product is
// <x,y> = (1/T) sum_k x(t_k) y(t_k), so that ||x||^2 = <x,x> matches the
// discrete norm sqrt(sum x(t_k)^2 / T).

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdepth/errors.hpp"
#include "fdepth/rng.hpp"

namespace fdepth {

class Grid {
public:
  explicit Grid(std::size_t size) {
    if (size < 2) throw std::invalid_argument("Grid: need at least 2 points");
    points_.resize(size);
    for (std::size_t k = 0; k < size; ++k)
      points_[k] = static_cast<double>(k) / static_cast<double>(size - 1);
  }

  std::size_t size() const { return points_.size(); }
  double point(std::size_t k) const { return points_[k]; }
  const std::vector<double>& points() const { return points_; }

  bool operator==(const Grid& other) const { return points_.size() == other.points_.size(); }

private:
  std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(std::size_t size) { return std::make_shared<Grid>(size); }

inline void check_same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b))
    throw std::invalid_argument("grid mismatch between functional objects");
}

class GridFunction {
public:
  GridFunction(GridPtr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_ || values_.size() != grid_->size())
      throw std::invalid_argument("GridFunction: value count must match grid");
    for (double v : values_)
      if (!std::isfinite(v))
        throw std::invalid_argument("GridFunction: values must be finite");
  }

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  const double* data() const { return values_.data(); }

private:
  GridPtr grid_;
  std::vector<double> values_;
};

// n curves sharing one grid, stored contiguously row-major.
class FunctionalSample {
public:
  FunctionalSample(GridPtr grid, std::size_t n)
      : grid_(std::move(grid)), n_(n), values_(n * grid_->size(), 0.0) {
    if (n_ < 1) throw std::invalid_argument("FunctionalSample: need n >= 1");
  }

  static FunctionalSample from_curves(const std::vector<GridFunction>& curves) {
    if (curves.empty())
      throw std::invalid_argument("FunctionalSample: need n >= 1");
    FunctionalSample s(curves.front().grid(), curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
      check_same_grid(s.grid_, curves[i].grid());
      s.set_curve(i, curves[i].values());
    }
    return s;
  }

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return n_; }
  std::size_t grid_size() const { return grid_->size(); }

  std::span<const double> curve(std::size_t i) const {
    return {values_.data() + i * grid_->size(), grid_->size()};
  }
  std::span<double> curve(std::size_t i) {
    return {values_.data() + i * grid_->size(), grid_->size()};
  }
  GridFunction curve_function(std::size_t i) const {
    auto c = curve(i);
    return GridFunction(grid_, std::vector<double>(c.begin(), c.end()));
  }

  void set_curve(std::size_t i, std::span<const double> v) {
    if (v.size() != grid_->size())
      throw std::invalid_argument("set_curve: wrong length");
    std::copy(v.begin(), v.end(), values_.begin() + i * grid_->size());
  }

  const std::vector<double>& raw() const { return values_; }
  std::vector<double>& raw() { return values_; }

private:
  GridPtr grid_;
  std::size_t n_;
  std::vector<double> values_;
};

inline double dot_mean(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s / static_cast<double>(n);
}

inline double inner_product(const GridFunction& x, const GridFunction& y) {
  check_same_grid(x.grid(), y.grid());
  return dot_mean(x.data(), y.data(), x.size());
}

inline double norm(const GridFunction& x) {
  return std::sqrt(dot_mean(x.data(), x.data(), x.size()));
}

inline double norm_raw(std::span<const double> v) {
  return std::sqrt(dot_mean(v.data(), v.data(), v.size()));
}

// Unit vector in the discrete norm.
class Direction {
public:
  Direction(GridPtr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_ || values_.size() != grid_->size())
      throw std::invalid_argument("Direction: value count must match grid");
    const double nrm = norm_raw(values_);
    if (std::abs(nrm - 1.0) > 1e-10)
      throw std::invalid_argument("Direction: discrete norm must be 1, got " +
                                  std::to_string(nrm));
  }

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }
  const double* data() const { return values_.data(); }

private:
  GridPtr grid_;
  std::vector<double> values_;
};

// Draw iid standard normals per grid point and normalize; smooth on the
// sphere of the discretized space. An all-zero draw has probability zero but
// underflow is guarded by a redraw.
inline Direction sample_direction(const GridPtr& grid, Rng& rng) {
  const std::size_t t = grid->size();
  std::vector<double> v(t);
  double nrm = 0.0;
  do {
    for (std::size_t k = 0; k < t; ++k) v[k] = rng.normal();
    nrm = norm_raw(v);
  } while (!(nrm > 1e-150));
  for (double& x : v) x /= nrm;
  return Direction(grid, std::move(v));
}

// Fills `out` (length T) with a fresh unit direction; avoids allocation in
// hot loops. Same draw sequence as sample_direction.
inline void sample_direction_raw(std::size_t t, Rng& rng, double* out) {
  double nrm = 0.0;
  do {
    for (std::size_t k = 0; k < t; ++k) out[k] = rng.normal();
    nrm = std::sqrt(dot_mean(out, out, t));
  } while (!(nrm > 1e-150));
  for (std::size_t k = 0; k < t; ++k) out[k] /= nrm;
}

inline std::vector<double> project(const FunctionalSample& sample, const Direction& v) {
  check_same_grid(sample.grid(), v.grid());
  const std::size_t n = sample.size(), t = sample.grid_size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = dot_mean(sample.raw().data() + i * t, v.data(), t);
  return out;
}

}  // namespace fdepth
