#pragma once

// Robust univariate statistics with the exact order-statistic conventions
// used throughout: median = Z_((n+1)/2) for odd n and the midpoint of the two
// central order statistics for even n; MAD = median of absolute deviations
// from the median; the u-quantile is the inf-type empirical quantile with
// q_0 = 0 for nonnegative data.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fdepth {

namespace detail {

// Median by partial selection; value-identical to sort-and-index.
inline double median_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  const std::size_t hi = n / 2;
  std::nth_element(v.begin(), v.begin() + hi, v.end());
  const double upper = v[hi];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + hi);
  return 0.5 * (lower + upper);
}

inline double mad_inplace(std::span<double> v, std::vector<double>& scratch) {
  const double med = median_inplace(v);
  scratch.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) scratch[i] = std::abs(v[i] - med);
  return median_inplace(scratch);
}

}  // namespace detail

inline double sample_median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sample_median: empty input");
  std::vector<double> copy(values.begin(), values.end());
  return detail::median_inplace(copy);
}

inline double sample_mad(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sample_mad: empty input");
  std::vector<double> copy(values.begin(), values.end());
  std::vector<double> scratch;
  return detail::mad_inplace(copy, scratch);
}

// Inf-type empirical quantile: q_0 = 0, otherwise the ceil(u*L)-th order
// statistic. The tiny slack absorbs cases like 0.001*1000 evaluating to
// 1 + 2^-52 in floating point, which must still select k = 1.
inline double empirical_quantile(std::span<const double> values, double u) {
  if (values.empty())
    throw std::invalid_argument("empirical_quantile: empty input");
  if (!(u >= 0.0) || u >= 1.0)
    throw std::invalid_argument("empirical_quantile: u must lie in [0,1)");
  if (u == 0.0) return 0.0;
  const std::size_t l = values.size();
  auto k = static_cast<std::size_t>(
      std::ceil(u * static_cast<double>(l) - 1e-9));
  if (k < 1) k = 1;
  if (k > l) k = l;
  std::vector<double> copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
  return copy[k - 1];
}

}  // namespace fdepth
