// datagen: GP sampling, bases, eigengap spectra, KL expansions, models.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "fdepth/datagen.hpp"
#include "fdepth/grid.hpp"
#include "fdepth/rng.hpp"

using namespace fdepth;

namespace {

GridFunction constant(const GridPtr& g, double v) {
  return GridFunction(g, std::vector<double>(g->size(), v));
}

double col_variance(const FunctionalSample& s, std::size_t k) {
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) mean += s.curve(i)[k];
  mean /= static_cast<double>(s.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s.curve(i)[k] - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(s.size() - 1);
}

}  // namespace

TEST_CASE("gp_sample with zero covariance returns the mean exactly") {
  auto g = make_grid(31);
  std::vector<double> mv(31);
  for (std::size_t k = 0; k < 31; ++k) mv[k] = std::cos(2.0 * g->point(k));
  GpSpec spec{GridFunction(g, mv), [](double, double) { return 0.0; }};
  Rng rng(1);
  const FunctionalSample s = gp_sample(spec, 4, rng);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 31; ++k) REQUIRE(s.curve(i)[k] == mv[k]);
}

TEST_CASE("gp_sample matches the target variance and mean") {
  auto g = make_grid(51);
  GpSpec spec{constant(g, 0.25), [](double s, double t) {
                return std::exp(-std::abs(s - t));
              }};
  Rng rng(42);
  const FunctionalSample s = gp_sample(spec, 5000, rng);
  REQUIRE(col_variance(s, 25) == Catch::Approx(1.0).margin(0.07));
  for (std::size_t k = 0; k < 51; k += 10) {
    double mean = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) mean += s.curve(i)[k];
    mean /= static_cast<double>(s.size());
    REQUIRE(mean == Catch::Approx(0.25).margin(0.06));
  }
}

TEST_CASE("gp_sample empirical covariance matches the kernel") {
  auto g = make_grid(41);
  const CovarianceFn kernels[] = {
      [](double s, double t) { return std::exp(-std::abs(s - t)); },
      [](double s, double t) { return 0.2 * std::exp(-std::abs(s - t) / 0.3); },
      l_model_covariance(),
  };
  Rng rng(4242);
  for (const auto& kernel : kernels) {
    GpSpec spec{constant(g, 0.0), kernel};
    const std::size_t n = 5000;
    const FunctionalSample s = gp_sample(spec, n, rng);
    double max_diag = 0.0;
    for (std::size_t k = 0; k < 41; ++k)
      max_diag = std::max(max_diag, kernel(g->point(k), g->point(k)));
    double worst = 0.0;
    for (std::size_t a = 0; a < 41; a += 4)
      for (std::size_t b = a; b < 41; b += 4) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          acc += s.curve(i)[a] * s.curve(i)[b];
        const double emp = acc / static_cast<double>(n - 1);
        worst = std::max(worst, std::abs(emp - kernel(g->point(a), g->point(b))));
      }
    REQUIRE(worst <= 5.0 * max_diag / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("D5 covariance factorizes (clipping tolerated)") {
  auto g = make_grid(101);
  GpSpec spec{constant(g, 0.0), [](double s, double t) {
                return 0.1 * std::exp(-std::pow(std::abs(s - t), 0.1) / 4.0);
              }};
  Rng rng(7);
  const FunctionalSample s = gp_sample(spec, 50, rng);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t k = 0; k < s.grid_size(); ++k)
      REQUIRE(std::isfinite(s.curve(i)[k]));
}

TEST_CASE("legendre basis: constant first, odd second, orthonormal") {
  auto g = make_grid(101);
  const auto phi = legendre_basis(g, 6);
  REQUIRE(phi.size() == 6);
  for (std::size_t k = 0; k < 101; ++k)
    REQUIRE(phi[0][k] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(phi[1][50] == Catch::Approx(0.0).margin(1e-10));  // odd about 0.5
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const double expect = (i == j) ? 1.0 : 0.0;
      REQUIRE(inner_product(phi[i], phi[j]) ==
              Catch::Approx(expect).margin(1e-8));
    }
  REQUIRE_THROWS_AS(legendre_basis(g, 11), std::invalid_argument);
}

TEST_CASE("gram_schmidt") {
  auto g = make_grid(101);
  // already orthonormal input is unchanged
  const auto ortho = legendre_basis(g, 4);
  const auto gs = gram_schmidt(ortho);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 101; ++k)
      REQUIRE(gs[j][k] == Catch::Approx(ortho[j][k]).margin(1e-12));

  // {1, t} -> {1, sqrt(3)(2t-1)} up to grid-level error
  std::vector<double> tv(101);
  for (std::size_t k = 0; k < 101; ++k) tv[k] = g->point(k);
  const auto out = gram_schmidt({constant(g, 1.0), GridFunction(g, tv)});
  for (std::size_t k = 0; k < 101; k += 20) {
    const double expect = std::sqrt(3.0) * (2.0 * g->point(k) - 1.0);
    REQUIRE(out[1][k] == Catch::Approx(expect).margin(0.02));
  }
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      REQUIRE(inner_product(out[i], out[j]) ==
              Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-10));

  // near-dependence fails
  std::vector<double> almost(101, 1.0);
  almost[3] += 1e-13;
  REQUIRE_THROWS_AS(gram_schmidt({constant(g, 1.0), GridFunction(g, almost)}),
                    NumericalError);
}

TEST_CASE("bspline basis: clamped cubic on 21 equispaced knots") {
  auto g = make_grid(101);
  const auto bs = bspline_basis(g);
  REQUIRE(bs.size() == 23);
  // partition of unity across the grid
  for (std::size_t k = 0; k < 101; ++k) {
    double sum = 0.0;
    for (const auto& b : bs) sum += b[k];
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-10));
  }
  REQUIRE(bs[0][0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(bs[0][100] == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(bs[22][100] == Catch::Approx(1.0).margin(1e-12));

  // 11th function (index 10) supported on [7/20, 11/20]
  for (std::size_t k = 0; k < 101; ++k) {
    const double t = g->point(k);
    if (t < 0.35 - 1e-12 || t > 0.55 + 1e-12) {
      REQUIRE(bs[10][k] == Catch::Approx(0.0).margin(1e-12));
    } else if (t > 0.36 && t < 0.54) {
      REQUIRE(bs[10][k] > 0.0);
    }
  }
  // reference values from an independent spline evaluator
  REQUIRE(bs[10][37] == Catch::Approx(0.010666666666666613).margin(1e-12));
  REQUIRE(bs[10][50] == Catch::Approx(1.0 / 6.0).margin(1e-12));
  REQUIRE(bs[11][50] == Catch::Approx(2.0 / 3.0).margin(1e-12));
  REQUIRE(bs[11][55] == Catch::Approx(1.0 / 6.0).margin(1e-12));
}

TEST_CASE("trig basis values and orthonormality") {
  auto g = make_grid(101);
  const auto phi = trig_basis(g, 21);
  REQUIRE(phi.size() == 21);
  for (std::size_t k = 0; k < 101; ++k)
    REQUIRE(phi[0][k] == 1.0);
  REQUIRE(phi[1][25] == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
  // phi_21 = sqrt(2) cos(20 pi t)
  for (std::size_t k : {0UL, 10UL, 30UL, 77UL}) {
    const double expect = std::sqrt(2.0) * std::cos(20.0 * M_PI * g->point(k));
    REQUIRE(phi[20][k] == Catch::Approx(expect).margin(1e-12));
  }
  // periodic Gram is exact; the closed-grid Gram carries the inherent 2/T
  // term from the duplicated period endpoint
  double worst_periodic = 0.0, worst_closed = 0.0;
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = i; j < 21; ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      worst_periodic = std::max(
          worst_periodic,
          std::abs(dot_mean(phi[i].data(), phi[j].data(), 100) - target));
      worst_closed =
          std::max(worst_closed, std::abs(inner_product(phi[i], phi[j]) - target));
    }
  REQUIRE(worst_periodic <= 1e-12);
  REQUIRE(worst_closed <= 2.0 / 101.0 + 1e-12);
  // aliasing into the zero function must be rejected
  REQUIRE_THROWS_AS(trig_basis(g, 101), std::invalid_argument);
  REQUIRE_THROWS_AS(trig_basis(make_grid(31), 30), std::invalid_argument);
}

TEST_CASE("eigenvalues_from_decay") {
  const auto g5 = eigenvalues_from_decay(5.0, 10);
  REQUIRE(g5[0] == Catch::Approx(2.073855510286741).epsilon(1e-10));
  REQUIRE(g5[1] == Catch::Approx(0.07385551028673988).epsilon(1e-9));
  REQUIRE(g5[2] == Catch::Approx(0.011355510286739853).epsilon(1e-9));
  for (std::size_t j = 0; j + 1 < g5.size(); ++j) {
    REQUIRE(g5[j] > g5[j + 1]);
    const double gap = 2.0 * std::pow(static_cast<double>(j + 1), -5.0);
    REQUIRE(g5[j] - g5[j + 1] == Catch::Approx(gap).epsilon(1e-10));
  }
  REQUIRE(g5.back() > 0.0);
  const auto g25 = eigenvalues_from_decay(2.5, 3);
  REQUIRE(g25[0] == Catch::Approx(2.682974514501835).epsilon(1e-9));
  REQUIRE_THROWS_AS(eigenvalues_from_decay(2.0, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(eigenvalues_from_decay(1.5, 5), std::invalid_argument);
}

TEST_CASE("kl_sample") {
  auto g = make_grid(101);
  const auto phi = trig_basis(g, 10);
  std::vector<double> mv(101);
  for (std::size_t k = 0; k < 101; ++k) mv[k] = 2.0 * g->point(k);
  const GridFunction mu(g, mv);

  // all-zero eigenvalues reproduce the mean
  KlSpec flat{mu, std::vector<double>(10, 0.0), phi};
  Rng rng(3);
  const FunctionalSample s0 = kl_sample(flat, 3, rng);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 101; ++k)
      REQUIRE(s0.curve(i)[k] == Catch::Approx(mv[k]).margin(1e-12));

  // single eigenfunction: curves are mu + xi * phi_1
  KlSpec single{mu, {1.0}, {phi[0]}};
  Rng rng1(4);
  const FunctionalSample s1 = kl_sample(single, 5, rng1);
  for (std::size_t i = 0; i < 5; ++i) {
    const double xi = s1.curve(i)[0] - mv[0];
    for (std::size_t k = 0; k < 101; ++k)
      REQUIRE(s1.curve(i)[k] == Catch::Approx(mv[k] + xi).margin(1e-10));
  }

  // empirical score variance approaches gamma_1
  const auto gamma = eigenvalues_from_decay(5.0, 10);
  KlSpec spec{GridFunction(g, std::vector<double>(101, 0.0)), gamma, phi};
  Rng rng2(5);
  const FunctionalSample s = kl_sample(spec, 5000, rng2);
  double acc = 0.0, acc2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double score = dot_mean(s.curve(i).data(), phi[0].data(), 101);
    acc += score;
    acc2 += score * score;
  }
  const double n = static_cast<double>(s.size());
  const double var = (acc2 - acc * acc / n) / (n - 1.0);
  REQUIRE(var == Catch::Approx(gamma[0]).epsilon(0.05));

  KlSpec bad{mu, {1.0, 2.0}, {phi[0], phi[1]}};  // increasing eigenvalues
  Rng rng3(6);
  REQUIRE_THROWS_AS(kl_sample(bad, 1, rng3), std::invalid_argument);
}

TEST_CASE("model label counts are exact") {
  Rng rng(17);
  ModelParams p;
  p.grid_size = 51;
  struct Case { const char* id; std::size_t n, m; double eps, c; std::size_t expect_total, expect_true; };
  const Case cases[] = {
      {"D1", 100, 10, 0, 0, 100, 10},
      {"D4", 57, 8, 0, 0, 57, 8},
      {"C2", 30, 0, 0, 0, 60, 30},
      {"T3", 40, 0, 0, 0.6, 40, 20},
      {"L1", 100, 0, 0.025, 0, 100, 2},
      {"L5", 100, 0, 0.075, 0, 100, 7},
      {"L6", 80, 0, 0.1, 0, 80, 8},
  };
  for (const auto& c : cases) {
    p.n = c.n;
    p.m = c.m;
    p.epsilon = c.eps;
    p.c = c.c;
    const LabeledSample out = generate_model(c.id, p, rng);
    REQUIRE(out.sample.size() == c.expect_total);
    REQUIRE(out.labels.size() == c.expect_total);
    std::size_t count = 0;
    for (bool b : out.labels) count += b ? 1 : 0;
    REQUIRE(count == c.expect_true);
  }
}

TEST_CASE("models are deterministic under a fixed seed") {
  ModelParams p;
  p.n = 20;
  p.m = 4;
  p.epsilon = 0.1;
  p.c = 0.4;
  p.grid_size = 31;
  for (const char* id : {"D1", "D2", "D3", "D4", "D5", "D6", "C1", "C2", "C3",
                         "T1", "T2", "T3", "T4", "L1", "L2", "L3", "L4", "L5"}) {
    Rng a(123), b(123);
    const LabeledSample s1 = generate_model(id, p, a);
    const LabeledSample s2 = generate_model(id, p, b);
    REQUIRE(s1.sample.raw() == s2.sample.raw());
    REQUIRE(s1.labels == s2.labels);
  }
}

TEST_CASE("D1 with m = 0 is the pure trend model") {
  ModelParams p;
  p.n = 12;
  p.m = 0;
  p.grid_size = 21;
  Rng rng(9);
  const LabeledSample out = generate_model("D1", p, rng);
  for (bool b : out.labels) REQUIRE_FALSE(b);
  REQUIRE(out.sample.size() == 12);
}

TEST_CASE("T models share one distribution at c = 0") {
  auto g = make_grid(101);
  for (const char* id : {"T1", "T2", "T3", "T4"}) {
    const auto [g1, g2] = t_model_specs(id, 0.0, g);
    REQUIRE(g1.mean.values() == g2.mean.values());
    REQUIRE(g1.eigenvalues == g2.eigenvalues);
    for (std::size_t j = 0; j < g1.eigenfunctions.size(); ++j)
      for (std::size_t k = 0; k < 101; k += 9)
        REQUIRE(g1.eigenfunctions[j][k] ==
                Catch::Approx(g2.eigenfunctions[j][k]).margin(1e-10));
  }
  REQUIRE_THROWS_AS(t_model_specs("T1", 1.5, g), ConfigError);
}

TEST_CASE("T4 second-group eigenfunctions stay orthonormal") {
  auto g = make_grid(101);
  for (double c : {0.3, 0.7, 1.0}) {
    const auto [g1, g2] = t_model_specs("T4", c, g);
    for (std::size_t i = 0; i < g2.eigenfunctions.size(); ++i)
      for (std::size_t j = i; j < g2.eigenfunctions.size(); ++j)
        REQUIRE(inner_product(g2.eigenfunctions[i], g2.eigenfunctions[j]) ==
                Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-8));
  }
}

TEST_CASE("L2 contaminants double the clean dispersion") {
  ModelParams p;
  p.n = 5000;
  p.epsilon = 0.4;  // large block of contaminants for the variance check
  p.grid_size = 31;
  Rng rng(31);
  const LabeledSample out = generate_model("L2", p, rng);
  std::size_t n_clean = 0;
  for (bool b : out.labels) n_clean += b ? 0 : 1;
  // pointwise variance of contaminated block ~= 4x clean block
  const std::size_t k = 15;
  double vc, vo;
  {
    double mean = 0.0, ss = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < out.sample.size(); ++i)
      if (!out.labels[i]) { mean += out.sample.curve(i)[k]; ++cnt; }
    mean /= static_cast<double>(cnt);
    for (std::size_t i = 0; i < out.sample.size(); ++i)
      if (!out.labels[i]) {
        const double d = out.sample.curve(i)[k] - mean;
        ss += d * d;
      }
    vc = ss / static_cast<double>(cnt - 1);
  }
  {
    double mean = 0.0, ss = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < out.sample.size(); ++i)
      if (out.labels[i]) { mean += out.sample.curve(i)[k]; ++cnt; }
    mean /= static_cast<double>(cnt);
    for (std::size_t i = 0; i < out.sample.size(); ++i)
      if (out.labels[i]) {
        const double d = out.sample.curve(i)[k] - mean;
        ss += d * d;
      }
    vo = ss / static_cast<double>(cnt - 1);
  }
  REQUIRE(vo / vc == Catch::Approx(4.0).epsilon(0.10));
}

TEST_CASE("D6 clean coefficients recover the equicorrelation matrix") {
  ModelParams p;
  p.n = 5000;
  p.m = 0;
  p.grid_size = 101;
  Rng rng(77);
  const LabeledSample out = generate_model("D6", p, rng);
  auto g = out.sample.grid();
  const auto phi = legendre_basis(g, 6);
  // recover coefficients by projection (phi is discretely orthonormal)
  std::vector<std::vector<double>> coef(6, std::vector<double>(out.sample.size()));
  for (std::size_t i = 0; i < out.sample.size(); ++i)
    for (std::size_t j = 0; j < 6; ++j)
      coef[j][i] = dot_mean(out.sample.curve(i).data(), phi[j].data(), 101);
  const double n = static_cast<double>(out.sample.size());
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a; b < 6; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < out.sample.size(); ++i)
        acc += coef[a][i] * coef[b][i];
      const double expect = (a == b) ? 1.0 : 0.95;
      REQUIRE(acc / (n - 1.0) == Catch::Approx(expect).epsilon(0.05));
    }
}

TEST_CASE("unknown models and bad parameters are configuration errors") {
  ModelParams p;
  p.n = 10;
  Rng rng(1);
  REQUIRE_THROWS_AS(generate_model("D9", p, rng), ConfigError);
  REQUIRE_THROWS_AS(generate_model("X1", p, rng), ConfigError);
  p.epsilon = 0.7;
  REQUIRE_THROWS_AS(generate_model("L1", p, rng), ConfigError);
  ModelParams q;
  q.n = 11;  // odd total for a two-group model
  REQUIRE_THROWS_AS(generate_model("T1", q, rng), ConfigError);
}
