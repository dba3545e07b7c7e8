#pragma once

// Sample regularized projection depth (RPD) computed by random projections,
// and the four baseline functional depths: integrated halfspace depth (FD),
// modified band depth (MBD, bands of 2), infimal halfspace depth (ID) and
// spherical depth (SD).
//
// RPD pipeline: estimate the regularization threshold beta as the u-quantile
// of projection MADs over L random directions, then build a pool of exactly
// M directions accepted by rejection sampling (projection MAD >= beta, and
// strictly positive), caching each direction's projection median and MAD.
// The depth of x is min over pool directions of 1/(1 + |<x,v>-med|/MAD).
//
// Determinism: beta-estimation direction i and pool slot m draw from
// substreams (seed, BETA, i) and (seed, POOL, m), so the accepted pool -- and
// any prefix of it -- is independent of evaluation order and of how many
// directions are requested beyond the prefix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdepth/errors.hpp"
#include "fdepth/grid.hpp"
#include "fdepth/rng.hpp"
#include "fdepth/robust.hpp"

namespace fdepth {

enum class Method { Rpd, Fd, Mbd, Id, Sd };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Rpd: return "rpd";
    case Method::Fd: return "fd";
    case Method::Mbd: return "mbd";
    case Method::Id: return "id";
    case Method::Sd: return "sd";
  }
  return "?";
}

struct DepthConfig {
  double u = 0.001;                // quantile level of the MAD distribution
  std::size_t L = 1000;            // directions for estimating beta
  std::size_t M = 10000;           // directions in the depth pool
  std::uint64_t seed = 0;
  std::size_t rejection_cap = 1000;  // max draws per accepted direction
};

// A depth method plus its configuration; u is ignored by the baselines.
struct MethodSpec {
  Method method = Method::Fd;
  double u = 0.001;

  std::string label() const {
    if (method != Method::Rpd) return method_name(method);
    std::ostringstream os;
    os << "rpd:" << u;
    return os.str();
  }
};

namespace detail {
constexpr std::uint64_t kBetaTag = 0xBE7A;
constexpr std::uint64_t kPoolTag = 0xD00Au;

inline void project_raw(const FunctionalSample& sample, const double* dir,
                        double* out) {
  const std::size_t n = sample.size(), t = sample.grid_size();
  const double* base = sample.raw().data();
  for (std::size_t i = 0; i < n; ++i) out[i] = dot_mean(base + i * t, dir, t);
}
}  // namespace detail

// u-quantile of the sample projection MADs over L fresh directions.
inline double estimate_beta(const FunctionalSample& sample, double u,
                            std::size_t l, std::uint64_t seed) {
  if (sample.size() < 2)
    throw std::invalid_argument("estimate_beta: need n >= 2");
  if (!(u >= 0.0) || u >= 1.0)
    throw std::invalid_argument("estimate_beta: u must lie in [0,1)");
  if (l < 1) throw std::invalid_argument("estimate_beta: need L >= 1");
  const std::size_t n = sample.size(), t = sample.grid_size();
  std::vector<double> dir(t), proj(n), scratch, mads(l);
  for (std::size_t i = 0; i < l; ++i) {
    Rng rng = Rng::substream(seed, {detail::kBetaTag, i});
    sample_direction_raw(t, rng, dir.data());
    detail::project_raw(sample, dir.data(), proj.data());
    mads[i] = detail::mad_inplace(proj, scratch);
  }
  return empirical_quantile(mads, u);
}

struct DirectionPool {
  GridPtr grid;
  std::size_t count = 0;            // M
  std::vector<double> directions;   // count x T, row-major
  std::vector<double> medians;      // per-direction projection median
  std::vector<double> mads;         // per-direction projection MAD
  double beta_hat = 0.0;
  std::uint64_t total_draws = 0;    // diagnostics: draws over all slots

  std::span<const double> direction(std::size_t m) const {
    const std::size_t t = grid->size();
    return {directions.data() + m * t, t};
  }
};

// Rejection sampling from nu conditioned on {MAD >= beta_hat}. Directions
// with zero MAD are always rejected: outlyingness is undefined there, so the
// boundary case u = 0 is handled strictly rather than admitting 0/0.
inline DirectionPool build_pool(const FunctionalSample& sample,
                                const DepthConfig& config) {
  if (sample.size() < 2) throw std::invalid_argument("build_pool: need n >= 2");
  if (config.M < 1) throw std::invalid_argument("build_pool: need M >= 1");
  if (config.rejection_cap < 1)
    throw std::invalid_argument("build_pool: need rejection_cap >= 1");

  DirectionPool pool;
  pool.grid = sample.grid();
  pool.beta_hat = estimate_beta(sample, config.u, config.L, config.seed);
  pool.count = config.M;
  const std::size_t n = sample.size(), t = sample.grid_size();
  pool.directions.resize(config.M * t);
  pool.medians.resize(config.M);
  pool.mads.resize(config.M);

  std::vector<double> proj(n), work(n), scratch;
  double min_mad_seen = std::numeric_limits<double>::infinity();
  double max_mad_seen = 0.0;
  for (std::size_t m = 0; m < config.M; ++m) {
    Rng rng = Rng::substream(config.seed, {detail::kPoolTag, m});
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < config.rejection_cap; ++attempt) {
      ++pool.total_draws;
      double* dir = pool.directions.data() + m * t;
      sample_direction_raw(t, rng, dir);
      detail::project_raw(sample, dir, proj.data());
      work = proj;
      const double med = detail::median_inplace(work);
      for (std::size_t i = 0; i < n; ++i) work[i] = std::abs(proj[i] - med);
      const double mad = detail::median_inplace(work);
      min_mad_seen = std::min(min_mad_seen, mad);
      max_mad_seen = std::max(max_mad_seen, mad);
      if (mad >= pool.beta_hat && mad > 0.0) {
        pool.medians[m] = med;
        pool.mads[m] = mad;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "regularization infeasible: no direction with projection MAD >= "
         << pool.beta_hat << " (> 0) accepted within " << config.rejection_cap
         << " draws for slot " << m << "; u = " << config.u
         << ", observed MAD range [" << min_mad_seen << ", " << max_mad_seen
         << "] over " << pool.total_draws << " draws";
      throw NumericalError(os.str());
    }
  }
  return pool;
}

// Projection outlyingness |<x,v> - med| / mad with sample plug-ins.
inline double outlyingness(const GridFunction& x, double median, double mad,
                           const Direction& v) {
  if (!(mad > 0.0))
    throw std::invalid_argument("outlyingness: mad must be positive");
  check_same_grid(x.grid(), v.grid());
  const double p = dot_mean(x.data(), v.data(), x.size());
  return std::abs(p - median) / mad;
}

namespace detail {
inline double max_outlyingness_prefix(const DirectionPool& pool,
                                      const double* x, std::size_t upto) {
  const std::size_t t = pool.grid->size();
  double worst = 0.0;
  for (std::size_t m = 0; m < upto; ++m) {
    const double p = dot_mean(pool.directions.data() + m * t, x, t);
    const double o = std::abs(p - pool.medians[m]) / pool.mads[m];
    if (o > worst) worst = o;
  }
  return worst;
}
}  // namespace detail

inline double rpd(const GridFunction& x, const DirectionPool& pool) {
  if (pool.count == 0) throw std::invalid_argument("rpd: empty pool");
  check_same_grid(x.grid(), pool.grid);
  return 1.0 / (1.0 + detail::max_outlyingness_prefix(pool, x.data(), pool.count));
}

// Depth over nested prefixes of the pool: cuts must be increasing positions
// <= pool.count. Used for convergence diagnostics; element j is the depth
// using only the first cuts[j] directions.
inline std::vector<double> rpd_prefix(const GridFunction& x,
                                      const DirectionPool& pool,
                                      std::span<const std::size_t> cuts) {
  check_same_grid(x.grid(), pool.grid);
  std::vector<double> out;
  out.reserve(cuts.size());
  const std::size_t t = pool.grid->size();
  double worst = 0.0;
  std::size_t m = 0;
  for (std::size_t cut : cuts) {
    if (cut < m || cut > pool.count)
      throw std::invalid_argument("rpd_prefix: cuts must be increasing and <= M");
    for (; m < cut; ++m) {
      const double p = dot_mean(pool.directions.data() + m * t, x.data(), t);
      const double o = std::abs(p - pool.medians[m]) / pool.mads[m];
      if (o > worst) worst = o;
    }
    out.push_back(1.0 / (1.0 + worst));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Baseline depths.
//
// The evaluator precomputes what a batch of queries against a fixed sample
// needs: per-gridpoint sorted values for FD/ID/MBD, the Gram matrix for SD.
// depth_loo(i) evaluates sample curve i against the sample with itself
// removed (used by the rank-test runner).
// ---------------------------------------------------------------------------

class DepthEvaluator {
public:
  DepthEvaluator(const FunctionalSample& sample, const MethodSpec& spec,
                 const DepthConfig& config = {})
      : sample_(&sample), spec_(spec) {
    const std::size_t n = sample.size();
    switch (spec.method) {
      case Method::Rpd: {
        DepthConfig cfg = config;
        cfg.u = spec.u;
        pool_ = build_pool(sample, cfg);
        break;
      }
      case Method::Fd:
      case Method::Id:
      case Method::Mbd: {
        if (spec.method == Method::Mbd && n < 2)
          throw std::invalid_argument("mbd: need n >= 2");
        build_sorted_columns();
        break;
      }
      case Method::Sd:
        if (n < 2) throw std::invalid_argument("sd: need n >= 2");
        break;
    }
  }

  const DirectionPool& pool() const {
    if (spec_.method != Method::Rpd)
      throw std::logic_error("pool(): evaluator is not RPD");
    return pool_;
  }

  Method method() const { return spec_.method; }

  double depth(const GridFunction& x) const {
    check_same_grid(x.grid(), sample_->grid());
    return depth_raw(x.data());
  }

  double depth_raw(const double* x) const {
    switch (spec_.method) {
      case Method::Rpd:
        return 1.0 / (1.0 + detail::max_outlyingness_prefix(pool_, x, pool_.count));
      case Method::Fd: return fd_id_raw(x, /*infimal=*/false, kNoSkip);
      case Method::Id: return fd_id_raw(x, /*infimal=*/true, kNoSkip);
      case Method::Mbd: return mbd_raw(x, kNoSkip);
      case Method::Sd: return sd_raw(x, kNoSkip);
    }
    return 0.0;
  }

  // Depth of sample curve i with curve i excluded from the reference sample.
  double depth_loo(std::size_t i) const {
    if (i >= sample_->size()) throw std::invalid_argument("depth_loo: bad index");
    const double* x = sample_->raw().data() + i * sample_->grid_size();
    switch (spec_.method) {
      case Method::Rpd: return rpd_loo(i);
      case Method::Fd: return fd_id_raw(x, false, i);
      case Method::Id: return fd_id_raw(x, true, i);
      case Method::Mbd: return mbd_raw(x, i);
      case Method::Sd: return sd_raw(x, i);
    }
    return 0.0;
  }

private:
  static constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

  void build_sorted_columns() {
    const std::size_t n = sample_->size(), t = sample_->grid_size();
    columns_.resize(t * n);
    for (std::size_t k = 0; k < t; ++k) {
      double* col = columns_.data() + k * n;
      for (std::size_t i = 0; i < n; ++i) col[i] = sample_->raw()[i * t + k];
      std::sort(col, col + n);
    }
  }

  // Univariate halfspace depth per grid point, averaged (FD) or minimized
  // (ID). Ties count on both sides. skip removes one sample curve.
  double fd_id_raw(const double* x, bool infimal, std::size_t skip) const {
    const std::size_t n = sample_->size(), t = sample_->grid_size();
    const std::size_t eff = (skip == kNoSkip) ? n : n - 1;
    if (eff == 0) throw std::invalid_argument("depth: empty reference sample");
    double acc = infimal ? 1.0 : 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      const double* col = columns_.data() + k * n;
      const double z = x[k];
      std::size_t below = std::lower_bound(col, col + n, z) - col;   // strictly <
      std::size_t above = n - (std::upper_bound(col, col + n, z) - col);  // strictly >
      if (skip != kNoSkip) {
        const double own = sample_->raw()[skip * t + k];
        if (own < z) --below;
        else if (own > z) --above;
        // ties: the skipped value sat in the tie block, counts shrink with eff
      }
      const double le = static_cast<double>(eff - above);  // # <= z
      const double ge = static_cast<double>(eff - below);  // # >= z
      const double d = std::min(le, ge) / static_cast<double>(eff);
      if (infimal) {
        if (d < acc) acc = d;
        if (acc == 0.0) return 0.0;
      } else {
        acc += d;
      }
    }
    return infimal ? acc : acc / static_cast<double>(t);
  }

  // J=2 band depth, boundary inclusive: a pair covers z at t unless both
  // values are strictly below or strictly above.
  double mbd_raw(const double* x, std::size_t skip) const {
    const std::size_t n = sample_->size(), t = sample_->grid_size();
    const std::size_t eff = (skip == kNoSkip) ? n : n - 1;
    if (eff < 2) throw std::invalid_argument("mbd: need >= 2 reference curves");
    const double total = 0.5 * static_cast<double>(eff) * static_cast<double>(eff - 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      const double* col = columns_.data() + k * n;
      const double z = x[k];
      std::size_t below = std::lower_bound(col, col + n, z) - col;
      std::size_t above = n - (std::upper_bound(col, col + n, z) - col);
      if (skip != kNoSkip) {
        const double own = sample_->raw()[skip * t + k];
        if (own < z) --below;
        else if (own > z) --above;
      }
      const double nb = static_cast<double>(below), na = static_cast<double>(above);
      const double covering = total - 0.5 * nb * (nb - 1.0) - 0.5 * na * (na - 1.0);
      acc += covering / total;
    }
    return acc / static_cast<double>(t);
  }

  // Fraction of unordered pairs {i,j} with <X_i - x, X_j - x> <= 0. The
  // difference is formed before the product: a Gram-matrix expansion would
  // turn the exact zero of pairs containing the query itself into rounding
  // noise and flip boundary counts.
  double sd_raw(const double* x, std::size_t skip) const {
    const std::size_t n = sample_->size(), t = sample_->grid_size();
    const double* base = sample_->raw().data();
    std::size_t hits = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == skip) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == skip) continue;
        ++pairs;
        const double* a = base + i * t;
        const double* b = base + j * t;
        double ip = 0.0;
        for (std::size_t k = 0; k < t; ++k) ip += (a[k] - x[k]) * (b[k] - x[k]);
        if (ip <= 0.0) ++hits;
      }
    }
    if (pairs == 0) throw std::invalid_argument("sd: need >= 2 reference curves");
    return static_cast<double>(hits) / static_cast<double>(pairs);
  }

  // Leave-one-out RPD: same accepted directions and beta, per-direction
  // median/MAD recomputed from the other n-1 projections. Directions whose
  // leave-one-out MAD collapses to zero are skipped. The M x n projection
  // matrix is cached on first use and shared by all queries.
  double rpd_loo(std::size_t i) const {
    const std::size_t n = sample_->size(), t = sample_->grid_size();
    if (n < 3) throw std::invalid_argument("rpd_loo: need n >= 3");
    if (loo_projections_.empty()) {
      loo_projections_.resize(pool_.count * n);
      for (std::size_t m = 0; m < pool_.count; ++m)
        detail::project_raw(*sample_, pool_.directions.data() + m * t,
                            loo_projections_.data() + m * n);
    }
    std::vector<double> sub(n - 1), dev(n - 1);
    double worst = 0.0;
    bool any = false;
    for (std::size_t m = 0; m < pool_.count; ++m) {
      const double* proj = loo_projections_.data() + m * n;
      std::size_t w = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) sub[w++] = proj[j];
      dev = sub;
      const double med = detail::median_inplace(dev);
      for (std::size_t j = 0; j + 1 < n; ++j) dev[j] = std::abs(sub[j] - med);
      const double mad = detail::median_inplace(dev);
      if (!(mad > 0.0)) continue;
      any = true;
      const double o = std::abs(proj[i] - med) / mad;
      if (o > worst) worst = o;
    }
    if (!any)
      throw NumericalError("rpd_loo: every pool direction degenerates without the curve");
    return 1.0 / (1.0 + worst);
  }

  const FunctionalSample* sample_;
  MethodSpec spec_;
  DirectionPool pool_;
  std::vector<double> columns_;  // T x n, each column sorted
  mutable std::vector<double> loo_projections_;  // M x n, built lazily
};

// One-shot wrappers around the evaluator.
inline double depth_fd(const GridFunction& x, const FunctionalSample& sample) {
  return DepthEvaluator(sample, {Method::Fd}).depth(x);
}
inline double depth_id(const GridFunction& x, const FunctionalSample& sample) {
  return DepthEvaluator(sample, {Method::Id}).depth(x);
}
inline double depth_mbd(const GridFunction& x, const FunctionalSample& sample) {
  return DepthEvaluator(sample, {Method::Mbd}).depth(x);
}
inline double depth_sd(const GridFunction& x, const FunctionalSample& sample) {
  return DepthEvaluator(sample, {Method::Sd}).depth(x);
}

struct DepthVector {
  std::vector<double> values;
  MethodSpec spec;
  DepthConfig config;
};

// Depth of every sample curve with respect to its own sample. For RPD one
// pool is built and reused for all n queries.
inline DepthVector depth_sample(const FunctionalSample& sample,
                                const MethodSpec& spec,
                                const DepthConfig& config = {}) {
  DepthEvaluator eval(sample, spec, config);
  DepthVector out;
  out.spec = spec;
  out.config = config;
  out.values.resize(sample.size());
  const std::size_t t = sample.grid_size();
  for (std::size_t i = 0; i < sample.size(); ++i)
    out.values[i] = eval.depth_raw(sample.raw().data() + i * t);
  return out;
}

}  // namespace fdepth
