#pragma once

// Downstream statistical tasks: depth-rank outlier reports, DD-transform
// classifiers, the tie-corrected Kruskal-Wallis test on depth ranks, and
// Monte Carlo location-estimation metrics (MISE = ISB + IVAR).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdepth/depths.hpp"
#include "fdepth/errors.hpp"
#include "fdepth/grid.hpp"
#include "fdepth/rng.hpp"
#include "fdepth/special.hpp"

namespace fdepth {

// ---------------------------------------------------------------------------
// Outlier ranking.
// ---------------------------------------------------------------------------

// rank/n per input curve, rank 1 = least deep; ties keep input order.
inline std::vector<double> rank_by_depth(std::span<const double> depths) {
  const std::size_t n = depths.size();
  if (n == 0) throw std::invalid_argument("rank_by_depth: empty input");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depths[a] < depths[b];
  });
  std::vector<double> ranks(n);
  for (std::size_t pos = 0; pos < n; ++pos)
    ranks[order[pos]] = static_cast<double>(pos + 1) / static_cast<double>(n);
  return ranks;
}

struct OutlierReport {
  std::vector<double> depth_ranks;  // rank/n in input order
  double mean_outlier_rank = 0.0;
};

inline OutlierReport outlier_report(std::span<const double> depths,
                                    const std::vector<bool>& outlier_labels) {
  if (depths.size() != outlier_labels.size())
    throw std::invalid_argument("outlier_report: label count mismatch");
  OutlierReport rep;
  rep.depth_ranks = rank_by_depth(depths);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (outlier_labels[i]) {
      sum += rep.depth_ranks[i];
      ++count;
    }
  }
  if (count == 0)
    throw std::invalid_argument("outlier_report: no outliers labeled");
  rep.mean_outlier_rank = sum / static_cast<double>(count);
  return rep;
}

// ---------------------------------------------------------------------------
// DD-transform classification.
// ---------------------------------------------------------------------------

struct DdPoint {
  double depth_in_x = 0.0;
  double depth_in_y = 0.0;
  bool from_y = false;
};

inline DdPoint dd_transform(const GridFunction& z, const DepthEvaluator& in_x,
                            const DepthEvaluator& in_y, bool from_y = false) {
  return DdPoint{in_x.depth(z), in_y.depth(z), from_y};
}

struct ClassifierModel {
  enum class Kind { MaxDepth, LinearDd };
  Kind kind = Kind::MaxDepth;
  double slope = 1.0;  // linear rule: classify Y iff depth_in_y > slope * depth_in_x
};

namespace detail {

// 0-1 training error of the slope rule; boundary points count 1/2.
inline double linear_dd_error(std::span<const DdPoint> train, double slope) {
  double err = 0.0;
  for (const auto& p : train) {
    const double lhs = p.depth_in_y, rhs = slope * p.depth_in_x;
    if (lhs == rhs) {
      err += 0.5;
    } else {
      const bool call_y = lhs > rhs;
      if (call_y != p.from_y) err += 1.0;
    }
  }
  return err / static_cast<double>(train.size());
}

}  // namespace detail

// Slope (through the origin) minimizing 0-1 training error. The error is
// piecewise constant between the candidate slopes {depth_in_y / depth_in_x};
// each open interval is scored at an interior point and the best interval's
// midpoint is returned. Slope 1 is always among the candidates.
inline ClassifierModel fit_linear_dd(std::span<const DdPoint> train) {
  bool has_x = false, has_y = false;
  for (const auto& p : train) (p.from_y ? has_y : has_x) = true;
  if (!has_x || !has_y)
    throw std::invalid_argument("fit_linear_dd: need at least one point per class");

  std::vector<double> cand;
  cand.push_back(1.0);
  for (const auto& p : train)
    if (p.depth_in_x > 0.0) cand.push_back(p.depth_in_y / p.depth_in_x);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // extreme slopes bracketing every candidate
  const double lo = 0.5 * cand.front();
  const double hi = cand.back() * 2.0 + 1.0;
  cand.insert(cand.begin(), lo);
  cand.push_back(hi);

  double best_err = 2.0, best_slope = 1.0;
  for (std::size_t i = 0; i + 1 < cand.size(); ++i) {
    const double mid = 0.5 * (cand[i] + cand[i + 1]);
    const double err = detail::linear_dd_error(train, mid);
    if (err < best_err) {
      best_err = err;
      best_slope = mid;
    }
  }
  return ClassifierModel{ClassifierModel::Kind::LinearDd, best_slope};
}

// Returns true for class Y. Exact ties consume one fair coin flip.
inline bool classify(const ClassifierModel& model, const DdPoint& point, Rng& rng) {
  const double lhs = point.depth_in_y;
  const double rhs = (model.kind == ClassifierModel::Kind::MaxDepth)
                         ? point.depth_in_x
                         : model.slope * point.depth_in_x;
  if (lhs == rhs) return rng.coin();
  return lhs > rhs;
}

// ---------------------------------------------------------------------------
// Kruskal-Wallis test on depth ranks.
// ---------------------------------------------------------------------------

struct KwResult {
  double statistic = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  bool reject_at_5pct = false;
};

// Mid-ranks for ties; tie-corrected statistic
//   H = [12 / (N(N+1)) * sum R_k^2 / n_k - 3(N+1)] / [1 - sum(t^3 - t)/(N^3 - N)]
// referred to chi-square with (groups - 1) degrees of freedom.
inline KwResult kw_test(std::span<const double> pooled,
                        std::span<const std::size_t> group_sizes) {
  const std::size_t n_total = pooled.size();
  if (group_sizes.size() < 2)
    throw std::invalid_argument("kw_test: need at least 2 groups");
  std::size_t check = 0;
  for (std::size_t g : group_sizes) {
    if (g == 0) throw std::invalid_argument("kw_test: empty group");
    check += g;
  }
  if (check != n_total)
    throw std::invalid_argument("kw_test: group sizes must sum to the pooled length");

  std::vector<std::size_t> order(n_total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pooled[a] < pooled[b];
  });

  std::vector<double> ranks(n_total);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < n_total) {
    std::size_t j = i;
    while (j < n_total && pooled[order[j]] == pooled[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mid;
    const auto t = static_cast<double>(j - i);
    if (j - i > 1) tie_term += t * t * t - t;
    i = j;
  }

  const auto nd = static_cast<double>(n_total);
  const double correction = 1.0 - tie_term / (nd * nd * nd - nd);
  if (correction <= 0.0)
    throw NumericalError("kw_test: all observations tied, statistic undefined");

  double h = 0.0;
  std::size_t start = 0;
  for (std::size_t g : group_sizes) {
    double rk = 0.0;
    for (std::size_t k = start; k < start + g; ++k) rk += ranks[k];
    h += rk * rk / static_cast<double>(g);
    start += g;
  }
  h = 12.0 / (nd * (nd + 1.0)) * h - 3.0 * (nd + 1.0);
  h /= correction;

  KwResult res;
  res.statistic = h;
  res.df = group_sizes.size() - 1;
  res.p_value = chi_square_upper_tail(h, static_cast<double>(res.df));
  res.reject_at_5pct = res.p_value < 0.05;
  return res;
}

// ---------------------------------------------------------------------------
// Location estimation.
// ---------------------------------------------------------------------------

// Argmax-depth curve; ties resolved to the lowest index.
inline GridFunction deepest_curve(const FunctionalSample& sample,
                                  std::span<const double> depths) {
  if (depths.size() != sample.size())
    throw std::invalid_argument("deepest_curve: depth count mismatch");
  std::size_t best = 0;
  for (std::size_t i = 1; i < depths.size(); ++i)
    if (depths[i] > depths[best]) best = i;
  return sample.curve_function(best);
}

struct LocationMetrics {
  double mise = 0.0, isb = 0.0, ivar = 0.0;
  double mise_sd = 0.0, isb_sd = 0.0, ivar_sd = 0.0;  // jackknife over replicates
};

// MISE = mean_r ||mu_hat_r - mu||^2, ISB = ||mean mu_hat - mu||^2, IVAR =
// integrated pointwise variance with divisor R, so MISE = ISB + IVAR exactly.
// Standard deviations are delete-one jackknife estimates.
inline LocationMetrics location_metrics(const std::vector<GridFunction>& estimates,
                                        const GridFunction& mu) {
  const std::size_t r_count = estimates.size();
  if (r_count < 2)
    throw std::invalid_argument("location_metrics: need at least 2 replicates");
  const std::size_t t = mu.size();
  for (const auto& e : estimates) check_same_grid(e.grid(), mu.grid());
  const auto rd = static_cast<double>(r_count);

  std::vector<double> ise(r_count);
  std::vector<double> mean_curve(t, 0.0);
  for (std::size_t r = 0; r < r_count; ++r) {
    double acc = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      const double d = estimates[r][k] - mu[k];
      acc += d * d;
      mean_curve[k] += estimates[r][k];
    }
    ise[r] = acc / static_cast<double>(t);
  }
  for (double& v : mean_curve) v /= rd;

  LocationMetrics out;
  out.mise = std::accumulate(ise.begin(), ise.end(), 0.0) / rd;
  double isb = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    const double d = mean_curve[k] - mu[k];
    isb += d * d;
  }
  out.isb = isb / static_cast<double>(t);
  out.ivar = out.mise - out.isb;

  // delete-one jackknife; leave-out means are O(T) updates of the mean curve
  std::vector<double> mise_lo(r_count), isb_lo(r_count), ivar_lo(r_count);
  const double total_ise = out.mise * rd;
  for (std::size_t r = 0; r < r_count; ++r) {
    mise_lo[r] = (total_ise - ise[r]) / (rd - 1.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      const double m_lo = (mean_curve[k] * rd - estimates[r][k]) / (rd - 1.0);
      const double d = m_lo - mu[k];
      acc += d * d;
    }
    isb_lo[r] = acc / static_cast<double>(t);
    ivar_lo[r] = mise_lo[r] - isb_lo[r];
  }
  auto jackknife_sd = [&](const std::vector<double>& lo) {
    const double mean_lo = std::accumulate(lo.begin(), lo.end(), 0.0) / rd;
    double ss = 0.0;
    for (double v : lo) ss += (v - mean_lo) * (v - mean_lo);
    return std::sqrt((rd - 1.0) / rd * ss);
  };
  out.mise_sd = jackknife_sd(mise_lo);
  out.isb_sd = jackknife_sd(isb_lo);
  out.ivar_sd = jackknife_sd(ivar_lo);
  return out;
}

}  // namespace fdepth
