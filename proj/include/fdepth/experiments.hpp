#pragma once

// Experiment runners. Each runner maps a validated ExperimentSpec to a
// ResultTable; replications run concurrently on substreams indexed by
// (experiment, model, parameter, replication, purpose), so output is
// byte-identical for any thread count.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fdepth/csv.hpp"
#include "fdepth/datagen.hpp"
#include "fdepth/depths.hpp"
#include "fdepth/errors.hpp"
#include "fdepth/parallel.hpp"
#include "fdepth/specfile.hpp"
#include "fdepth/stat_tasks.hpp"

namespace fdepth {

struct ResultRow {
  std::string model;
  std::string method;
  std::string param;
  std::string stat;
  double mean = 0.0;
  double sd = 0.0;
};

struct ResultTable {
  std::string experiment;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::vector<ResultRow> rows;

  std::string to_csv() const {
    std::ostringstream os;
    os << "experiment,model,method,param,stat,mean,sd,replications,seed\n";
    for (const auto& r : rows)
      os << experiment << ',' << r.model << ',' << r.method << ',' << r.param
         << ',' << r.stat << ',' << format_double(r.mean) << ','
         << format_double(r.sd) << ',' << replications << ',' << seed << '\n';
    return os.str();
  }

  // Console rendering; location metrics are displayed x1000 as in the usual
  // table convention.
  std::string to_text() const {
    std::ostringstream os;
    os << "experiment: " << experiment << "  (R = " << replications
       << ", seed = " << seed << ")\n";
    char buf[160];
    for (const auto& r : rows) {
      const bool scaled = r.stat == "mise" || r.stat == "isb" || r.stat == "ivar";
      const double f = scaled ? 1000.0 : 1.0;
      std::snprintf(buf, sizeof(buf), "  %-6s %-10s %-10s %-12s %10.4f (%.4f)\n",
                    r.model.c_str(), r.method.c_str(), r.param.c_str(),
                    (scaled ? (r.stat + "*1e3") : r.stat).c_str(), f * r.mean,
                    f * r.sd);
      os << buf;
    }
    return os.str();
  }
};

namespace detail {

constexpr std::uint64_t kOutliersTag = 1, kClassifyTag = 2, kKwTag = 3,
                        kLocationTag = 4, kConvergeTag = 5, kDepthTag = 6;

inline std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline DepthConfig depth_config(const ExperimentSpec& spec, std::uint64_t seed) {
  DepthConfig cfg;
  cfg.L = spec.direction_count_l;
  cfg.M = spec.direction_count_m;
  cfg.rejection_cap = spec.rejection_cap;
  cfg.seed = seed;
  return cfg;
}

inline unsigned thread_count(const ExperimentSpec& spec) {
  return spec.threads == 0 ? default_thread_count() : spec.threads;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Outlier detection (models D1..D6): mean rank of the true outliers.
// ---------------------------------------------------------------------------

inline ResultTable run_outliers(const ExperimentSpec& spec) {
  validate_spec(spec);
  ResultTable table{experiment_name(spec.experiment), spec.replications, spec.seed, {}};
  const auto r_count = spec.replications;

  for (std::size_t mi = 0; mi < spec.models.size(); ++mi) {
    const std::string& model = spec.models[mi];
    std::vector<std::vector<double>> ranks(spec.methods.size(),
                                           std::vector<double>(r_count));
    parallel_for(r_count, detail::thread_count(spec), [&](std::size_t r) {
      Rng data_rng = Rng::substream(spec.seed, {detail::kOutliersTag, mi, r, 0});
      ModelParams params;
      params.n = spec.n;
      params.m = spec.m;
      params.grid_size = spec.grid_size;
      const LabeledSample data = generate_model(model, params, data_rng);
      for (std::size_t j = 0; j < spec.methods.size(); ++j) {
        const auto cfg = detail::depth_config(
            spec, derive_seed(spec.seed, {detail::kOutliersTag, mi, r, 1, j}));
        const DepthVector depths = depth_sample(data.sample, spec.methods[j], cfg);
        ranks[j][r] = outlier_report(depths.values, data.labels).mean_outlier_rank;
      }
    });
    for (std::size_t j = 0; j < spec.methods.size(); ++j)
      table.rows.push_back({model, spec.methods[j].label(), "",
                            "mean_outlier_rank", detail::mean_of(ranks[j]),
                            detail::sd_of(ranks[j])});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Classification (models C1..C3): out-of-sample misclassification of the
// max-depth and linear DD rules; for RPD one pool per group, reused for all
// training and test queries.
// ---------------------------------------------------------------------------

inline ResultTable run_classification(const ExperimentSpec& spec) {
  validate_spec(spec);
  ResultTable table{experiment_name(spec.experiment), spec.replications, spec.seed, {}};
  const auto r_count = spec.replications;

  for (std::size_t mi = 0; mi < spec.models.size(); ++mi) {
    const std::string& model = spec.models[mi];
    std::vector<std::vector<double>> err_max(spec.methods.size(),
                                             std::vector<double>(r_count));
    std::vector<std::vector<double>> err_dd(spec.methods.size(),
                                            std::vector<double>(r_count));
    parallel_for(r_count, detail::thread_count(spec), [&](std::size_t r) {
      ModelParams params;
      params.n = spec.n;
      params.grid_size = spec.grid_size;
      Rng train_rng = Rng::substream(spec.seed, {detail::kClassifyTag, mi, r, 0});
      const LabeledSample train = generate_model(model, params, train_rng);
      ModelParams test_params = params;
      test_params.n = spec.n_test;
      Rng test_rng = Rng::substream(spec.seed, {detail::kClassifyTag, mi, r, 1});
      const LabeledSample test = generate_model(model, test_params, test_rng);

      // split the training block into per-group samples
      FunctionalSample train_x(train.sample.grid(), spec.n);
      FunctionalSample train_y(train.sample.grid(), spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) {
        train_x.set_curve(i, train.sample.curve(i));
        train_y.set_curve(i, train.sample.curve(spec.n + i));
      }

      for (std::size_t j = 0; j < spec.methods.size(); ++j) {
        const auto cfg_x = detail::depth_config(
            spec, derive_seed(spec.seed, {detail::kClassifyTag, mi, r, 2, j, 0}));
        const auto cfg_y = detail::depth_config(
            spec, derive_seed(spec.seed, {detail::kClassifyTag, mi, r, 2, j, 1}));
        DepthEvaluator in_x(train_x, spec.methods[j], cfg_x);
        DepthEvaluator in_y(train_y, spec.methods[j], cfg_y);

        std::vector<DdPoint> dd_train(2 * spec.n);
        for (std::size_t i = 0; i < 2 * spec.n; ++i) {
          const double* c = train.sample.raw().data() + i * spec.grid_size;
          dd_train[i] = DdPoint{in_x.depth_raw(c), in_y.depth_raw(c),
                                train.labels[i]};
        }
        const ClassifierModel linear = fit_linear_dd(dd_train);
        const ClassifierModel maxrule{ClassifierModel::Kind::MaxDepth, 1.0};

        Rng coin = Rng::substream(spec.seed, {detail::kClassifyTag, mi, r, 3, j});
        double wrong_max = 0.0, wrong_dd = 0.0;
        for (std::size_t i = 0; i < test.sample.size(); ++i) {
          const double* c = test.sample.raw().data() + i * spec.grid_size;
          const DdPoint p{in_x.depth_raw(c), in_y.depth_raw(c), test.labels[i]};
          if (classify(maxrule, p, coin) != p.from_y) wrong_max += 1.0;
          if (classify(linear, p, coin) != p.from_y) wrong_dd += 1.0;
        }
        err_max[j][r] = wrong_max / static_cast<double>(test.sample.size());
        err_dd[j][r] = wrong_dd / static_cast<double>(test.sample.size());
      }
    });
    for (std::size_t j = 0; j < spec.methods.size(); ++j) {
      table.rows.push_back({model, spec.methods[j].label(), "max",
                            "misclassification", detail::mean_of(err_max[j]),
                            detail::sd_of(err_max[j])});
      table.rows.push_back({model, spec.methods[j].label(), "dd",
                            "misclassification", detail::mean_of(err_dd[j]),
                            detail::sd_of(err_dd[j])});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Rank test (models T1..T4): Kruskal-Wallis on depth ranks, all depths taken
// with respect to the first group's sample. kw_self picks how the reference
// group's own curves are evaluated (leave-one-out or self-inclusive).
// ---------------------------------------------------------------------------

inline ResultTable run_kwtest(const ExperimentSpec& spec) {
  validate_spec(spec);
  ResultTable table{experiment_name(spec.experiment), spec.replications, spec.seed, {}};
  const auto r_count = spec.replications;
  const std::size_t half = spec.n / 2;

  for (std::size_t mi = 0; mi < spec.models.size(); ++mi) {
    const std::string& model = spec.models[mi];
    for (std::size_t ci = 0; ci < spec.severities.size(); ++ci) {
      const double c = spec.severities[ci];
      std::vector<std::vector<double>> reject(spec.methods.size(),
                                              std::vector<double>(r_count));
      parallel_for(r_count, detail::thread_count(spec), [&](std::size_t r) {
        ModelParams params;
        params.n = spec.n;
        params.c = c;
        params.grid_size = spec.grid_size;
        Rng data_rng = Rng::substream(spec.seed, {detail::kKwTag, mi, ci, r, 0});
        const LabeledSample data = generate_model(model, params, data_rng);

        FunctionalSample group1(data.sample.grid(), half);
        for (std::size_t i = 0; i < half; ++i)
          group1.set_curve(i, data.sample.curve(i));

        for (std::size_t j = 0; j < spec.methods.size(); ++j) {
          const auto cfg = detail::depth_config(
              spec, derive_seed(spec.seed, {detail::kKwTag, mi, ci, r, 1, j}));
          DepthEvaluator ref(group1, spec.methods[j], cfg);
          std::vector<double> pooled(spec.n);
          for (std::size_t i = 0; i < half; ++i)
            pooled[i] = (spec.kw_self == KwSelf::Loo)
                            ? ref.depth_loo(i)
                            : ref.depth_raw(group1.raw().data() +
                                            i * spec.grid_size);
          for (std::size_t i = 0; i < half; ++i)
            pooled[half + i] = ref.depth_raw(data.sample.raw().data() +
                                             (half + i) * spec.grid_size);
          const std::size_t sizes[2] = {half, half};
          reject[j][r] = kw_test(pooled, sizes).reject_at_5pct ? 1.0 : 0.0;
        }
      });
      for (std::size_t j = 0; j < spec.methods.size(); ++j)
        table.rows.push_back({model, spec.methods[j].label(),
                              detail::format_param(c), "rejection_rate",
                              detail::mean_of(reject[j]),
                              detail::sd_of(reject[j])});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Location estimation (models L1..L6): deepest-curve median, MISE/ISB/IVAR
// against the clean mean.
// ---------------------------------------------------------------------------

inline ResultTable run_location(const ExperimentSpec& spec) {
  validate_spec(spec);
  ResultTable table{experiment_name(spec.experiment), spec.replications, spec.seed, {}};
  const auto r_count = spec.replications;

  for (std::size_t mi = 0; mi < spec.models.size(); ++mi) {
    const std::string& model = spec.models[mi];
    for (std::size_t ei = 0; ei < spec.epsilons.size(); ++ei) {
      const double eps = spec.epsilons[ei];
      std::vector<std::vector<GridFunction>> estimates(
          spec.methods.size(),
          std::vector<GridFunction>(
              r_count, GridFunction(make_grid(spec.grid_size),
                                    std::vector<double>(spec.grid_size, 0.0))));
      parallel_for(r_count, detail::thread_count(spec), [&](std::size_t r) {
        ModelParams params;
        params.n = spec.n;
        params.epsilon = eps;
        params.grid_size = spec.grid_size;
        Rng data_rng = Rng::substream(spec.seed,
                                      {detail::kLocationTag, mi, ei, r, 0});
        const LabeledSample data = generate_model(model, params, data_rng);
        for (std::size_t j = 0; j < spec.methods.size(); ++j) {
          const auto cfg = detail::depth_config(
              spec, derive_seed(spec.seed, {detail::kLocationTag, mi, ei, r, 1, j}));
          const DepthVector depths = depth_sample(data.sample, spec.methods[j], cfg);
          estimates[j][r] = deepest_curve(data.sample, depths.values);
        }
      });
      const GridFunction target = l_model_target(make_grid(spec.grid_size));
      for (std::size_t j = 0; j < spec.methods.size(); ++j) {
        const LocationMetrics met = location_metrics(estimates[j], target);
        const std::string& label = spec.methods[j].label();
        const std::string param = detail::format_param(eps);
        table.rows.push_back({model, label, param, "mise", met.mise, met.mise_sd});
        table.rows.push_back({model, label, param, "isb", met.isb, met.isb_sd});
        table.rows.push_back({model, label, param, "ivar", met.ivar, met.ivar_sd});
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Convergence of the stochastic approximation (the two reference functions
// against a fixed smooth Gaussian sample), one pool per replication, depth
// read off at nested prefixes of the direction budget.
// ---------------------------------------------------------------------------

inline CovarianceFn converge_covariance() {
  return [](double s, double t) {
    const double d = s - t;
    return std::exp(-d * d / 0.32);
  };
}

inline ResultTable run_converge(const ExperimentSpec& spec) {
  validate_spec(spec);
  ResultTable table{experiment_name(spec.experiment), spec.replications, spec.seed, {}};
  const auto r_count = spec.replications;
  const GridPtr grid = make_grid(spec.grid_size);
  const std::size_t t = grid->size();

  std::vector<double> zero(t, 0.0), wave(t);
  for (std::size_t k = 0; k < t; ++k)
    wave[k] = 1.5 * std::sin(2.0 * M_PI * grid->point(k));
  const GridFunction central(grid, zero), peripheral(grid, wave);
  const GpSpec gp{central, converge_covariance()};

  for (std::size_t j = 0; j < spec.methods.size(); ++j) {
    std::vector<std::vector<double>> dc(spec.m_grid.size(),
                                        std::vector<double>(r_count));
    std::vector<std::vector<double>> dp(spec.m_grid.size(),
                                        std::vector<double>(r_count));
    parallel_for(r_count, detail::thread_count(spec), [&](std::size_t r) {
      Rng data_rng = Rng::substream(spec.seed, {detail::kConvergeTag, r, 0});
      const FunctionalSample sample = gp_sample(gp, spec.n, data_rng);
      auto cfg = detail::depth_config(
          spec, derive_seed(spec.seed, {detail::kConvergeTag, r, 1, j}));
      cfg.M = spec.m_grid.back();
      cfg.u = spec.methods[j].u;
      const DirectionPool pool = build_pool(sample, cfg);
      const auto c_prefix = rpd_prefix(central, pool, spec.m_grid);
      const auto p_prefix = rpd_prefix(peripheral, pool, spec.m_grid);
      for (std::size_t q = 0; q < spec.m_grid.size(); ++q) {
        dc[q][r] = c_prefix[q];
        dp[q][r] = p_prefix[q];
      }
    });
    for (std::size_t q = 0; q < spec.m_grid.size(); ++q) {
      const std::string param = std::to_string(spec.m_grid[q]);
      table.rows.push_back({"central", spec.methods[j].label(), param,
                            "mean_depth", detail::mean_of(dc[q]),
                            detail::sd_of(dc[q])});
      table.rows.push_back({"peripheral", spec.methods[j].label(), param,
                            "mean_depth", detail::mean_of(dp[q]),
                            detail::sd_of(dp[q])});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Ad-hoc depth evaluation of a CSV dataset; returns the augmented CSV text.
// ---------------------------------------------------------------------------

inline std::string run_depth_csv(const ExperimentSpec& spec) {
  validate_spec(spec);
  const Dataset data = read_dataset_csv_file(spec.input_path);
  const auto cfg = detail::depth_config(
      spec, derive_seed(spec.seed, {detail::kDepthTag}));
  DepthEvaluator eval(data.sample, spec.methods.front(), cfg);
  std::vector<double> depths(data.sample.size());
  for (std::size_t i = 0; i < data.sample.size(); ++i)
    depths[i] = eval.depth_raw(data.sample.raw().data() +
                               i * data.sample.grid_size());
  std::ostringstream os;
  write_dataset_csv(os, data, &depths);
  return os.str();
}

inline ResultTable run_experiment(const ExperimentSpec& spec) {
  switch (spec.experiment) {
    case ExperimentKind::Outliers: return run_outliers(spec);
    case ExperimentKind::Classify: return run_classification(spec);
    case ExperimentKind::KwTest: return run_kwtest(spec);
    case ExperimentKind::Location: return run_location(spec);
    case ExperimentKind::Converge: return run_converge(spec);
    case ExperimentKind::Depth:
      throw ConfigError("depth experiment produces a CSV, use run_depth_csv");
  }
  throw ConfigError("unknown experiment");
}

}  // namespace fdepth
