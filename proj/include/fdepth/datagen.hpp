#pragma once

// Seeded generators for the simulation study: Gaussian processes on the
// grid, orthonormal polynomial / B-spline / trigonometric bases,
// Karhunen-Loeve expansions with eigengap-controlled spectra, and the
// D / C / T / L model families built from them.
//
// Stream discipline: scores are consumed curve-major, coefficient-minor, so
// the realized curves depend only on the substream, never on labels.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fdepth/errors.hpp"
#include "fdepth/grid.hpp"
#include "fdepth/rng.hpp"

namespace fdepth {

// ---------------------------------------------------------------------------
// Gaussian processes.
// ---------------------------------------------------------------------------

using CovarianceFn = std::function<double(double, double)>;

struct GpSpec {
  GridFunction mean;
  CovarianceFn covariance;
};

// T x T symmetric factor B with B B^T ~= K, via eigendecomposition.
// Rounding-level negative eigenvalues are repaired by diagonal jitter
// (1e-10..1e-6 of the max diagonal); anything still negative beyond that is
// clipped to zero with a warning, and a genuinely indefinite matrix fails.
class GpFactor {
public:
  GpFactor(const GridPtr& grid, const CovarianceFn& cov) : grid_(grid) {
    const std::size_t t = grid->size();
    Eigen::MatrixXd k(t, t);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = i; j < t; ++j) {
        const double v = cov(grid->point(i), grid->point(j));
        k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
      max_diag = std::max(max_diag, k(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(i)));
    }
    if (max_diag == 0.0) {  // zero covariance: trajectories equal the mean
      factor_ = Eigen::MatrixXd::Zero(t, t);
      return;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    double jitter = 0.0;
    for (;;) {
      Eigen::MatrixXd kj = k;
      if (jitter > 0.0)
        kj.diagonal().array() += jitter;
      es.compute(kj);
      if (es.info() != Eigen::Success)
        throw NumericalError("gp factor: eigendecomposition failed");
      const double min_eig = es.eigenvalues().minCoeff();
      if (min_eig >= 0.0) break;
      if (jitter == 0.0) {
        jitter = 1e-10 * max_diag;
      } else if (jitter < 1e-6 * max_diag) {
        jitter *= 10.0;
      } else {
        if (min_eig < -1e-6 * max_diag) {
          std::ostringstream os;
          os << "gp factor: covariance not PSD, smallest eigenvalue "
             << min_eig << " after jitter " << jitter;
          throw NumericalError(os.str());
        }
        std::cerr << "fdepth: warning: clipping negative covariance "
                     "eigenvalue " << min_eig << " to 0\n";
        break;
      }
    }
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor_ = es.eigenvectors() * lam.asDiagonal();
  }

  const GridPtr& grid() const { return grid_; }

  // x = mean + B z for one standard normal vector z drawn from rng.
  void sample_into(const double* mean, Rng& rng, double* out) const {
    const auto t = static_cast<Eigen::Index>(grid_->size());
    Eigen::VectorXd z(t);
    for (Eigen::Index k = 0; k < t; ++k) z(k) = rng.normal();
    Eigen::VectorXd x = factor_ * z;
    for (Eigen::Index k = 0; k < t; ++k) out[k] = mean[k] + x(k);
  }

private:
  GridPtr grid_;
  Eigen::MatrixXd factor_;
};

inline FunctionalSample gp_sample(const GpSpec& spec, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("gp_sample: need n >= 1");
  const GridPtr& grid = spec.mean.grid();
  GpFactor factor(grid, spec.covariance);
  FunctionalSample out(grid, n);
  for (std::size_t i = 0; i < n; ++i)
    factor.sample_into(spec.mean.data(), rng, out.curve(i).data());
  return out;
}

// ---------------------------------------------------------------------------
// Bases.
// ---------------------------------------------------------------------------

// Classical sequential Gram-Schmidt in the discrete inner product;
// order-preserving, same span.
inline std::vector<GridFunction> gram_schmidt(const std::vector<GridFunction>& fns) {
  std::vector<GridFunction> out;
  out.reserve(fns.size());
  for (const auto& f : fns) {
    if (!out.empty()) check_same_grid(f.grid(), out.front().grid());
    std::vector<double> w = f.values();
    const std::size_t t = w.size();
    for (const auto& q : out) {
      const double c = dot_mean(w.data(), q.data(), t);
      for (std::size_t k = 0; k < t; ++k) w[k] -= c * q[k];
    }
    const double nrm = std::sqrt(dot_mean(w.data(), w.data(), t));
    if (nrm < 1e-10)
      throw NumericalError("gram_schmidt: inputs numerically dependent (pivot " +
                           std::to_string(nrm) + ")");
    for (double& x : w) x /= nrm;
    out.emplace_back(f.grid(), std::move(w));
  }
  return out;
}

// Shifted Legendre-type polynomials: monomials 1, t, t^2, ... orthonormalized
// in the discrete inner product. phi_k has degree k-1; phi_1 is constant.
inline std::vector<GridFunction> legendre_basis(const GridPtr& grid,
                                                std::size_t count) {
  if (count < 1 || count > 10)
    throw std::invalid_argument("legendre_basis: count must be in [1,10]");
  std::vector<GridFunction> mono;
  mono.reserve(count);
  const std::size_t t = grid->size();
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> v(t);
    for (std::size_t j = 0; j < t; ++j) v[j] = std::pow(grid->point(j), static_cast<double>(k));
    mono.emplace_back(grid, std::move(v));
  }
  return gram_schmidt(mono);
}

// Cubic B-splines on 21 equispaced knots with clamped ends (boundary knot
// multiplicity 4): 23 basis functions via Cox-de Boor.
inline std::vector<GridFunction> bspline_basis(const GridPtr& grid) {
  constexpr int kDegree = 3;
  constexpr int kKnots = 21;
  std::vector<double> knots;
  for (int r = 0; r < kDegree; ++r) knots.push_back(0.0);
  for (int j = 0; j < kKnots; ++j)
    knots.push_back(static_cast<double>(j) / (kKnots - 1));
  for (int r = 0; r < kDegree; ++r) knots.push_back(1.0);
  const std::size_t nbasis = knots.size() - kDegree - 1;  // 23

  const std::size_t t = grid->size();
  std::vector<std::vector<double>> vals(nbasis, std::vector<double>(t, 0.0));
  std::vector<double> b(knots.size() - 1);
  for (std::size_t g = 0; g < t; ++g) {
    const double x = grid->point(g);
    // degree-0 indicators; the last interval is closed at 1 so B_22(1) = 1
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const bool last = knots[i] < 1.0 && knots[i + 1] >= 1.0;
      b[i] = (x >= knots[i] && (x < knots[i + 1] || (last && x == 1.0))) ? 1.0 : 0.0;
    }
    for (int d = 1; d <= kDegree; ++d) {
      for (std::size_t i = 0; i + d + 1 < knots.size(); ++i) {
        double left = 0.0, right = 0.0;
        const double dl = knots[i + d] - knots[i];
        const double dr = knots[i + d + 1] - knots[i + 1];
        if (dl > 0.0) left = (x - knots[i]) / dl * b[i];
        if (dr > 0.0) right = (knots[i + d + 1] - x) / dr * b[i + 1];
        b[i] = left + right;
      }
    }
    for (std::size_t i = 0; i < nbasis; ++i) vals[i][g] = b[i];
  }

  std::vector<GridFunction> out;
  out.reserve(nbasis);
  for (auto& v : vals) out.emplace_back(grid, std::move(v));
  return out;
}

// phi_1 = 1, phi_2m = sqrt(2) sin(2 m pi t), phi_2m+1 = sqrt(2) cos(2 m pi t).
// Exact orthogonality holds on equidistant grids up to aliasing; the discrete
// Gram matrix is checked against a 1e-2 tolerance.
inline std::vector<GridFunction> trig_basis(const GridPtr& grid,
                                            std::size_t count) {
  if (count < 1) throw std::invalid_argument("trig_basis: count >= 1");
  const std::size_t t = grid->size();
  const double kSqrt2 = std::sqrt(2.0);
  std::vector<GridFunction> out;
  out.reserve(count);
  {
    std::vector<double> ones(t, 1.0);
    out.emplace_back(grid, std::move(ones));
  }
  std::size_t m = 1;
  while (out.size() < count) {
    std::vector<double> s(t), c(t);
    for (std::size_t k = 0; k < t; ++k) {
      const double a = 2.0 * static_cast<double>(m) * M_PI * grid->point(k);
      s[k] = kSqrt2 * std::sin(a);
      c[k] = kSqrt2 * std::cos(a);
    }
    out.emplace_back(grid, std::move(s));
    if (out.size() < count) out.emplace_back(grid, std::move(c));
    ++m;
  }
  // Aliasing check on the periodic part of the grid (the final point repeats
  // t = 0 for every period-1 function and would add an inherent 2/T to each
  // cosine pair). Over t_0..t_{T-2} the discrete Fourier orthogonality is
  // exact for admissible frequencies and collapses once a frequency aliases.
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i; j < count; ++j) {
      const double g = dot_mean(out[i].data(), out[j].data(), t - 1);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  if (worst > 1e-2) {
    std::ostringstream os;
    os << "trig_basis: aliasing breaks orthogonality at count " << count
       << " on a " << t << "-point grid (periodic Gram deviation " << worst
       << ")";
    throw std::invalid_argument(os.str());
  }
  return out;
}

// gamma_j = 2 sum_{m >= j} m^{-a}: defining eigengaps gamma_j - gamma_{j+1}
// = 2 j^{-a} with gamma_1 = 2 zeta(a). Direct summation of 1e6 terms plus an
// Euler-Maclaurin tail keeps the relative error well under 1e-10.
inline std::vector<double> eigenvalues_from_decay(double a, std::size_t j_count) {
  if (!(a > 2.0))
    throw std::invalid_argument("eigenvalues_from_decay: need decay rate a > 2");
  if (j_count < 1)
    throw std::invalid_argument("eigenvalues_from_decay: need J >= 1");
  const std::size_t cutoff = j_count + 1000000;
  const double mc = static_cast<double>(cutoff);
  // tail sum_{m > cutoff} m^{-a}
  double tail = std::pow(mc + 1.0, 1.0 - a) / (a - 1.0) +
                0.5 * std::pow(mc + 1.0, -a) +
                (a / 12.0) * std::pow(mc + 1.0, -a - 1.0);
  // ascending summation, smallest terms first
  double s = tail;
  std::vector<double> gammas(j_count);
  for (std::size_t m = cutoff; m >= 1; --m) {
    s += std::pow(static_cast<double>(m), -a);
    if (m <= j_count) gammas[m - 1] = 2.0 * s;
    if (m == 1) break;
  }
  return gammas;
}

// ---------------------------------------------------------------------------
// Karhunen-Loeve expansions.
// ---------------------------------------------------------------------------

struct KlSpec {
  GridFunction mean;
  std::vector<double> eigenvalues;        // nonincreasing, nonnegative
  std::vector<GridFunction> eigenfunctions;

  void validate() const {
    if (eigenvalues.size() != eigenfunctions.size())
      throw std::invalid_argument("KlSpec: eigenvalue/eigenfunction count mismatch");
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
      if (!(eigenvalues[j] >= 0.0))
        throw std::invalid_argument("KlSpec: eigenvalues must be nonnegative");
      if (j > 0 && eigenvalues[j] > eigenvalues[j - 1])
        throw std::invalid_argument("KlSpec: eigenvalues must be nonincreasing");
      check_same_grid(mean.grid(), eigenfunctions[j].grid());
    }
  }
};

// X_i = mu + sum_j sqrt(gamma_j) xi_ij phi_j with standard normal scores.
inline FunctionalSample kl_sample(const KlSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("kl_sample: need n >= 1");
  const GridPtr& grid = spec.mean.grid();
  const std::size_t t = grid->size(), j_count = spec.eigenvalues.size();
  std::vector<double> roots(j_count);
  for (std::size_t j = 0; j < j_count; ++j) roots[j] = std::sqrt(spec.eigenvalues[j]);
  FunctionalSample out(grid, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.curve(i);
    std::copy(spec.mean.values().begin(), spec.mean.values().end(), row.begin());
    for (std::size_t j = 0; j < j_count; ++j) {
      const double score = roots[j] * rng.normal();
      const double* phi = spec.eigenfunctions[j].data();
      for (std::size_t k = 0; k < t; ++k) row[k] += score * phi[k];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation models.
// ---------------------------------------------------------------------------

struct LabeledSample {
  FunctionalSample sample;
  std::vector<bool> labels;  // outlier / class-Y / group-2 / contaminant
};

struct ModelParams {
  std::size_t n = 0;        // D, L: total curves; C, T: curves per group
  std::size_t m = 0;        // D models: outlier count
  double epsilon = 0.0;     // L models: contamination fraction
  double c = 0.0;           // T models: severity in [0,1]
  std::size_t grid_size = 101;
};

namespace detail {

// Draw from N(mean, cov) for small coefficient vectors.
class MvnSampler {
public:
  MvnSampler(Eigen::VectorXd mean, const Eigen::MatrixXd& cov)
      : mean_(std::move(mean)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-12)
      throw NumericalError("mvn: covariance not PSD");
    factor_ = es.eigenvectors() *
              es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }

  Eigen::VectorXd draw(Rng& rng) const {
    Eigen::VectorXd z(mean_.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.normal();
    return mean_ + factor_ * z;
  }

private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd factor_;
};

inline Eigen::MatrixXd equicorrelation(std::size_t d, double rho) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d), rho);
  s.diagonal().setOnes();
  return s;
}

inline GridFunction curve_from(const GridPtr& grid,
                               const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) v[k] = f(grid->point(k));
  return GridFunction(grid, std::move(v));
}

inline void add_coeff_expansion(std::span<double> row,
                                const Eigen::VectorXd& coeff,
                                const std::vector<GridFunction>& basis) {
  for (Eigen::Index j = 0; j < coeff.size(); ++j) {
    const double* phi = basis[static_cast<std::size_t>(j)].data();
    for (std::size_t k = 0; k < row.size(); ++k) row[k] += coeff(j) * phi[k];
  }
}

}  // namespace detail

// D-model error processes: lambda * exp(-|s-t| / lambda).
inline CovarianceFn exp_covariance(double lambda) {
  return [lambda](double s, double t) {
    return lambda * std::exp(-std::abs(s - t) / lambda);
  };
}

inline bool is_t_model(const std::string& id) { return id.size() == 2 && id[0] == 'T'; }

// Per-group Karhunen-Loeve specs for the two-sample models T1-T4. The first
// group is fixed (zero mean, decay 5, trigonometric eigenfunctions); severity
// c interpolates the second group away from it.
inline std::pair<KlSpec, KlSpec> t_model_specs(const std::string& id, double c,
                                               const GridPtr& grid) {
  if (!(c >= 0.0 && c <= 1.0))
    throw ConfigError("T models: severity c must lie in [0,1]");
  constexpr std::size_t kJ = 10;
  auto trig20 = trig_basis(grid, 2 * kJ);
  std::vector<GridFunction> phi1(trig20.begin(), trig20.begin() + kJ);
  const auto gamma1 = eigenvalues_from_decay(5.0, kJ);
  std::vector<double> zero(grid->size(), 0.0);
  KlSpec g1{GridFunction(grid, zero), gamma1, phi1};
  KlSpec g2 = g1;

  if (id != "T1" && id != "T2" && id != "T3" && id != "T4")
    throw ConfigError("unknown T model: " + id);
  // c = 0 is the common null; returning the first group's spec verbatim
  // keeps it exact (T4's re-orthonormalization would otherwise perturb the
  // basis at the discrete-grid level).
  if (c == 0.0) return {g1, g2};

  if (id == "T1") {
    g2.mean = detail::curve_from(grid, [c](double) { return 3.0 * c; });
  } else if (id == "T2") {
    g2.mean = detail::curve_from(
        grid, [c](double t) { return c * 1.2 * std::sin(2.0 * M_PI * t); });
  } else if (id == "T3") {
    const double a2 = (1.0 - c) * 5.0 + c * 2.5;
    g2.eigenvalues = eigenvalues_from_decay(a2, kJ);
  } else if (id == "T4") {
    std::vector<GridFunction> mixed;
    mixed.reserve(kJ);
    for (std::size_t j = 0; j < kJ; ++j) {
      std::vector<double> v(grid->size());
      const double* lo = phi1[j].data();
      const double* hi = trig20[kJ + j].data();
      for (std::size_t k = 0; k < grid->size(); ++k)
        v[k] = (1.0 - c) * lo[k] + c * hi[k];
      mixed.emplace_back(grid, std::move(v));
    }
    g2.eigenfunctions = gram_schmidt(mixed);
  }
  return {g1, g2};
}

// Clean-process mean of the L models (the location-estimation target).
inline GridFunction l_model_target(const GridPtr& grid) {
  return detail::curve_from(grid,
                            [](double t) { return std::sin(2.0 * M_PI * t); });
}

// Smooth squared-exponential covariance of the L-model processes.
inline CovarianceFn l_model_covariance() {
  return [](double s, double t) {
    const double d = s - t;
    return 0.3 * std::exp(-d * d / 10.0);
  };
}

// Generates one labeled dataset for model `id`. Curves are laid out clean
// block first, then the labeled block; depths are permutation invariant, so
// no shuffling is applied.
inline LabeledSample generate_model(const std::string& id,
                                    const ModelParams& params, Rng& rng) {
  const GridPtr grid = make_grid(params.grid_size);
  const std::size_t t = grid->size();
  std::vector<double> zero(t, 0.0);
  const GridFunction zero_fn(grid, zero);

  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(id + ": " + msg);
  };

  if (id.size() == 2 && id[0] == 'D') {
    require(params.n >= 1, "need n >= 1");
    require(params.m <= params.n, "need m <= n");
    const std::size_t nc = params.n - params.m, m = params.m;
    LabeledSample out{FunctionalSample(grid, params.n),
                      std::vector<bool>(params.n, false)};
    for (std::size_t i = nc; i < params.n; ++i) out.labels[i] = true;

    if (id == "D1") {
      GpFactor e1(grid, exp_covariance(1.0));
      auto trend = detail::curve_from(grid, [](double t_) { return 4.0 * t_; });
      for (std::size_t i = 0; i < nc; ++i)
        e1.sample_into(trend.data(), rng, out.sample.curve(i).data());
      for (std::size_t i = nc; i < params.n; ++i) {
        const double k = rng.coin() ? 1.0 : -1.0;
        auto row = out.sample.curve(i);
        e1.sample_into(trend.data(), rng, row.data());
        for (double& v : row) v += 8.0 * k;
      }
    } else if (id == "D2") {
      GpFactor e(grid, exp_covariance(0.3));
      auto mc = detail::curve_from(grid, [](double t_) {
        return 30.0 * t_ * std::pow(1.0 - t_, 1.5);
      });
      auto mo = detail::curve_from(grid, [](double t_) {
        return 30.0 * std::pow(t_, 1.5) * (1.0 - t_);
      });
      for (std::size_t i = 0; i < nc; ++i)
        e.sample_into(mc.data(), rng, out.sample.curve(i).data());
      for (std::size_t i = nc; i < params.n; ++i)
        e.sample_into(mo.data(), rng, out.sample.curve(i).data());
    } else if (id == "D3") {
      GpFactor e(grid, exp_covariance(1.0));
      GpFactor f(grid, [](double s, double t_) {
        return 5.0 * std::exp(-2.0 * std::sqrt(std::abs(s - t_)));
      });
      auto trend = detail::curve_from(grid, [](double t_) { return 4.0 * t_; });
      for (std::size_t i = 0; i < nc; ++i)
        e.sample_into(trend.data(), rng, out.sample.curve(i).data());
      for (std::size_t i = nc; i < params.n; ++i)
        f.sample_into(trend.data(), rng, out.sample.curve(i).data());
    } else if (id == "D4") {
      GpFactor e(grid, exp_covariance(1.0));
      auto mc = detail::curve_from(
          grid, [](double t_) { return 2.0 * std::sin(15.0 * M_PI * t_); });
      auto mo = detail::curve_from(grid, [](double t_) {
        return 2.0 * std::sin(15.0 * M_PI * t_ + 2.0);
      });
      for (std::size_t i = 0; i < nc; ++i)
        e.sample_into(mc.data(), rng, out.sample.curve(i).data());
      for (std::size_t i = nc; i < params.n; ++i)
        e.sample_into(mo.data(), rng, out.sample.curve(i).data());
    } else if (id == "D5") {
      GpFactor e(grid, exp_covariance(1.0));
      GpFactor f(grid, [](double s, double t_) {
        return 0.1 * std::exp(-std::pow(std::abs(s - t_), 0.1) / 4.0);
      });
      for (std::size_t i = 0; i < nc; ++i)
        e.sample_into(zero_fn.data(), rng, out.sample.curve(i).data());
      std::vector<double> shifted(t);
      for (std::size_t i = nc; i < params.n; ++i) {
        const double theta = rng.uniform(0.25, 0.5);
        for (std::size_t k = 0; k < t; ++k)
          shifted[k] = std::sin(20.0 * (grid->point(k) + theta) * M_PI);
        f.sample_into(shifted.data(), rng, out.sample.curve(i).data());
      }
    } else if (id == "D6") {
      auto phi = legendre_basis(grid, 6);
      const Eigen::MatrixXd sigma = detail::equicorrelation(6, 0.95);
      detail::MvnSampler clean(Eigen::VectorXd::Zero(6), sigma);
      detail::MvnSampler outlier(Eigen::VectorXd::Ones(6),
                                 sigma.inverse() / 100.0);
      for (std::size_t i = 0; i < params.n; ++i) {
        auto row = out.sample.curve(i);
        std::fill(row.begin(), row.end(), 0.0);
        const Eigen::VectorXd coeff =
            (i < nc) ? clean.draw(rng) : outlier.draw(rng);
        detail::add_coeff_expansion(row, coeff, phi);
      }
    } else {
      throw ConfigError("unknown D model: " + id);
    }
    return out;
  }

  if (id.size() == 2 && id[0] == 'C') {
    require(params.n >= 1, "need n >= 1 per group");
    const std::size_t n = params.n;
    LabeledSample out{FunctionalSample(grid, 2 * n),
                      std::vector<bool>(2 * n, false)};
    for (std::size_t i = n; i < 2 * n; ++i) out.labels[i] = true;

    if (id == "C1") {
      GpFactor e(grid, [](double s, double t_) {
        return 0.2 * std::exp(-std::abs(s - t_) / 0.3);
      });
      auto mx = detail::curve_from(grid, [](double t_) {
        return 30.0 * std::pow(t_, 1.2) * (1.0 - t_);
      });
      auto my = detail::curve_from(grid, [](double t_) {
        return 30.0 * t_ * std::pow(1.0 - t_, 1.2);
      });
      for (std::size_t i = 0; i < n; ++i)
        e.sample_into(mx.data(), rng, out.sample.curve(i).data());
      for (std::size_t i = n; i < 2 * n; ++i)
        e.sample_into(my.data(), rng, out.sample.curve(i).data());
    } else if (id == "C2" || id == "C3") {
      auto phi = legendre_basis(grid, 7);
      const Eigen::MatrixXd sigma = detail::equicorrelation(7, 0.9);
      auto mu = detail::curve_from(grid,
                                   [](double t_) { return 10.0 * t_ * (1.0 - t_); });
      detail::MvnSampler xs(Eigen::VectorXd::Zero(7), sigma);
      for (std::size_t i = 0; i < n; ++i) {
        auto row = out.sample.curve(i);
        std::copy(mu.values().begin(), mu.values().end(), row.begin());
        detail::add_coeff_expansion(row, xs.draw(rng), phi);
      }
      if (id == "C2") {
        auto bs = bspline_basis(grid);
        const GridFunction& xi6 = bs[10];  // 11th basis function
        const GridFunction& xi7 = bs[11];  // 12th
        Eigen::VectorXd mean_d = Eigen::VectorXd::Zero(7);
        mean_d(5) = 1.0;
        mean_d(6) = 1.0;
        detail::MvnSampler ys(mean_d, sigma);
        for (std::size_t i = n; i < 2 * n; ++i) {
          auto row = out.sample.curve(i);
          std::copy(mu.values().begin(), mu.values().end(), row.begin());
          const Eigen::VectorXd d = ys.draw(rng);
          for (std::size_t j = 0; j < 5; ++j) {
            const double* p = phi[j].data();
            for (std::size_t k = 0; k < t; ++k)
              row[k] += d(static_cast<Eigen::Index>(j)) * p[k];
          }
          for (std::size_t k = 0; k < t; ++k)
            row[k] += d(5) * xi6[k] + d(6) * xi7[k];
        }
      } else {
        // C3: 5-dimensional group with mean along the leading eigenvector of
        // Sigma2 = (Sigma_{5x5})^{-1} / 10, unit norm, nonnegative first entry
        const Eigen::MatrixXd sigma5 = sigma.topLeftCorner(5, 5);
        const Eigen::MatrixXd sigma2 = sigma5.inverse() / 10.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma2);
        Eigen::VectorXd lead = es.eigenvectors().col(4);
        if (lead(0) < 0.0) lead = -lead;
        detail::MvnSampler ys(lead, sigma2);
        std::vector<GridFunction> phi5(phi.begin(), phi.begin() + 5);
        for (std::size_t i = n; i < 2 * n; ++i) {
          auto row = out.sample.curve(i);
          std::fill(row.begin(), row.end(), 0.0);
          detail::add_coeff_expansion(row, ys.draw(rng), phi5);
        }
      }
    } else {
      throw ConfigError("unknown C model: " + id);
    }
    return out;
  }

  if (is_t_model(id)) {
    require(params.n >= 2 && params.n % 2 == 0, "need even total n");
    const std::size_t half = params.n / 2;
    auto [g1, g2] = t_model_specs(id, params.c, grid);
    LabeledSample out{FunctionalSample(grid, params.n),
                      std::vector<bool>(params.n, false)};
    FunctionalSample s1 = kl_sample(g1, half, rng);
    FunctionalSample s2 = kl_sample(g2, half, rng);
    for (std::size_t i = 0; i < half; ++i) {
      out.sample.set_curve(i, s1.curve(i));
      out.sample.set_curve(half + i, s2.curve(i));
      out.labels[half + i] = true;
    }
    return out;
  }

  if (id.size() == 2 && id[0] == 'L') {
    require(params.n >= 1, "need n >= 1");
    require(params.epsilon >= 0.0 && params.epsilon < 0.5,
            "need epsilon in [0, 1/2)");
    const auto n = params.n;
    const auto n_clean = static_cast<std::size_t>(
        std::ceil((1.0 - params.epsilon) * static_cast<double>(n)));
    const std::size_t n_cont = n - n_clean;
    const GridFunction mu = l_model_target(grid);
    const CovarianceFn cov = l_model_covariance();

    GridFunction mu_y = mu;
    CovarianceFn cov_y = cov;
    if (id == "L1") {
      mu_y = detail::curve_from(
          grid, [](double t_) { return std::sin(2.0 * M_PI * t_) + 1.0; });
    } else if (id == "L2") {
      mu_y = detail::curve_from(
          grid, [](double t_) { return 2.0 * std::sin(2.0 * M_PI * t_); });
      cov_y = [cov](double s, double t_) { return 4.0 * cov(s, t_); };
    } else if (id == "L3") {
      mu_y = detail::curve_from(grid, [](double t_) {
        return std::sin(2.0 * M_PI * (t_ + 0.125));
      });
    } else if (id == "L4") {
      mu_y = detail::curve_from(grid, [](double t_) {
        return std::sin(2.0 * M_PI * t_) + std::sin(8.0 * M_PI * t_) / 6.0;
      });
    } else if (id == "L5") {
      mu_y = detail::curve_from(grid, [](double t_) {
        return std::sin(2.0 * M_PI * t_) +
               2.0 * std::exp(-1000.0 * (t_ - 0.8) * (t_ - 0.8));
      });
    } else if (id == "L6") {
      mu_y = detail::curve_from(
          grid, [](double t_) { return std::sin(2.0 * M_PI * t_) + 1000.0; });
    } else {
      throw ConfigError("unknown L model: " + id);
    }

    LabeledSample out{FunctionalSample(grid, n), std::vector<bool>(n, false)};
    GpFactor clean_factor(grid, cov);
    for (std::size_t i = 0; i < n_clean; ++i)
      clean_factor.sample_into(mu.data(), rng, out.sample.curve(i).data());
    if (n_cont > 0) {
      GpFactor cont_factor(grid, cov_y);
      for (std::size_t i = n_clean; i < n; ++i) {
        cont_factor.sample_into(mu_y.data(), rng, out.sample.curve(i).data());
        out.labels[i] = true;
      }
    }
    return out;
  }

  throw ConfigError("unknown model id: " + id);
}

}  // namespace fdepth
