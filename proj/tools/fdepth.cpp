// Experiment CLI: one subcommand per experiment family, seeded spec files,
// CSV output. Exit codes: 0 success, 2 configuration error, 3 numerical
// error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "fdepth/errors.hpp"
#include "fdepth/experiments.hpp"
#include "fdepth/specfile.hpp"

namespace {

struct CommonArgs {
  std::string spec_path;
  std::string out_path;
  std::int64_t seed = -1;
  unsigned threads = 0;
  std::vector<std::string> overrides;
};

fdepth::ExperimentSpec load_spec(const CommonArgs& args,
                                 fdepth::ExperimentKind expected) {
  std::ifstream in(args.spec_path);
  if (!in) throw fdepth::ConfigError("cannot open spec file: " + args.spec_path);
  auto kv = fdepth::parse_key_values(in);
  for (const auto& item : args.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw fdepth::ConfigError("--set expects key=value, got: " + item);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  fdepth::ExperimentSpec spec = fdepth::build_spec(kv);
  if (spec.experiment != expected)
    throw fdepth::ConfigError(std::string("spec file is for experiment '") +
                              fdepth::experiment_name(spec.experiment) +
                              "', expected '" + fdepth::experiment_name(expected) +
                              "'");
  if (args.seed >= 0) spec.seed = static_cast<std::uint64_t>(args.seed);
  if (args.threads > 0) spec.threads = args.threads;
  if (!args.out_path.empty()) spec.output_path = args.out_path;
  fdepth::validate_spec(spec);
  return spec;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fdepth::ConfigError("cannot open output file: " + path);
  out << text;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--spec", args.spec_path, "experiment spec file")->required();
  cmd->add_option("--seed", args.seed, "master seed (overrides the spec file)");
  cmd->add_option("--out", args.out_path, "output CSV path");
  cmd->add_option("--threads", args.threads, "worker threads (default: hardware)");
  cmd->add_option("--set", args.overrides,
                  "override a spec key, e.g. --set replications=5");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional depth experiments"};
  app.require_subcommand(1);

  std::map<std::string, fdepth::ExperimentKind> kinds{
      {"outliers", fdepth::ExperimentKind::Outliers},
      {"classify", fdepth::ExperimentKind::Classify},
      {"kwtest", fdepth::ExperimentKind::KwTest},
      {"location", fdepth::ExperimentKind::Location},
      {"converge", fdepth::ExperimentKind::Converge},
      {"depth", fdepth::ExperimentKind::Depth},
  };
  std::map<std::string, CommonArgs> args;
  for (auto& [name, kind] : kinds) {
    auto* cmd = app.add_subcommand(name);
    add_common(cmd, args[name]);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const CommonArgs& a = args[name];
    const fdepth::ExperimentKind kind = kinds[name];
    const fdepth::ExperimentSpec spec = load_spec(a, kind);
    if (kind == fdepth::ExperimentKind::Depth) {
      const std::string csv = fdepth::run_depth_csv(spec);
      if (spec.output_path.empty())
        std::cout << csv;
      else
        write_output(spec.output_path, csv);
    } else {
      const fdepth::ResultTable table = fdepth::run_experiment(spec);
      std::cout << table.to_text();
      if (!spec.output_path.empty()) write_output(spec.output_path, table.to_csv());
    }
  } catch (const fdepth::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
