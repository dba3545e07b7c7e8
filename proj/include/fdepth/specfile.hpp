#pragma once

// Experiment spec files: flat "key = value" lines, '#' starts a comment,
// lists are comma-separated. Precedence is CLI flag > file > default.
// Validation happens before any random draw, so a rejected spec consumes no
// stream state.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fdepth/depths.hpp"
#include "fdepth/errors.hpp"

namespace fdepth {

enum class ExperimentKind { Outliers, Classify, KwTest, Location, Converge, Depth };

inline const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Outliers: return "outliers";
    case ExperimentKind::Classify: return "classify";
    case ExperimentKind::KwTest: return "kwtest";
    case ExperimentKind::Location: return "location";
    case ExperimentKind::Converge: return "converge";
    case ExperimentKind::Depth: return "depth";
  }
  return "?";
}

// Self-evaluation convention for reference-group depths in the rank test:
// leave-one-out is the unbiased choice; "include" keeps the reference
// group's own curves in their reference sample, which inflates the test size
// for depths with strong own-sample bias.
enum class KwSelf { Loo, Include };

struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::Outliers;
  std::vector<std::string> models;
  std::size_t n = 200;
  std::size_t grid_size = 101;
  std::size_t m = 20;                       // D models
  std::vector<double> epsilons{0.0};        // L models
  std::vector<double> severities{0.0};      // T models
  std::vector<MethodSpec> methods;
  std::size_t direction_count_l = 1000;     // L
  std::size_t direction_count_m = 10000;    // M
  std::size_t rejection_cap = 1000;
  std::size_t replications = 20;
  std::uint64_t seed = 1;
  std::size_t n_test = 400;                 // classify, per group
  std::vector<std::size_t> m_grid{100, 1000, 10000, 100000};  // converge
  KwSelf kw_self = KwSelf::Loo;
  std::string input_path;                   // depth
  std::string output_path;
  unsigned threads = 0;                     // 0 = hardware default
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("spec: bad numeric value for '" + key + "': " + s);
  }
}

inline std::uint64_t to_u64(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("spec: bad integer value for '" + key + "': " + s);
  return v;
}

}  // namespace detail

// "rpd:0.001" or "fd" / "mbd" / "id" / "sd".
inline MethodSpec parse_method(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  MethodSpec spec;
  if (name == "rpd") spec.method = Method::Rpd;
  else if (name == "fd") spec.method = Method::Fd;
  else if (name == "mbd") spec.method = Method::Mbd;
  else if (name == "id") spec.method = Method::Id;
  else if (name == "sd") spec.method = Method::Sd;
  else throw ConfigError("unknown depth method: " + text);
  if (spec.method == Method::Rpd) {
    if (colon == std::string::npos)
      throw ConfigError("rpd method needs a quantile level, e.g. rpd:0.001");
    spec.u = detail::to_double("method u", text.substr(colon + 1));
    if (!(spec.u >= 0.0) || spec.u >= 1.0)
      throw ConfigError("rpd quantile level must lie in [0,1)");
  } else if (colon != std::string::npos) {
    throw ConfigError("method '" + name + "' takes no parameter");
  }
  return spec;
}

inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("spec line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("spec line " + std::to_string(line_no) +
                        ": empty key or value");
    kv[key] = value;
  }
  return kv;
}

inline ExperimentSpec build_spec(const std::map<std::string, std::string>& kv);

inline ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file: " + path);
  auto kv = parse_key_values(in);
  return build_spec(kv);
}

inline ExperimentSpec build_spec(const std::map<std::string, std::string>& kv) {
  static const std::set<std::string> known{
      "experiment", "model",        "n",       "T",          "m",
      "epsilon",    "c",            "methods", "L",          "M",
      "rejection_cap", "replications", "seed", "n_test",     "m_grid",
      "kw_self",    "input",        "out",     "threads"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ConfigError("spec: unknown key '" + k + "'");

  ExperimentSpec spec;
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  const std::string* exp = get("experiment");
  if (!exp) throw ConfigError("spec: missing 'experiment'");
  if (*exp == "outliers") spec.experiment = ExperimentKind::Outliers;
  else if (*exp == "classify") spec.experiment = ExperimentKind::Classify;
  else if (*exp == "kwtest") spec.experiment = ExperimentKind::KwTest;
  else if (*exp == "location") spec.experiment = ExperimentKind::Location;
  else if (*exp == "converge") spec.experiment = ExperimentKind::Converge;
  else if (*exp == "depth") spec.experiment = ExperimentKind::Depth;
  else throw ConfigError("spec: unknown experiment '" + *exp + "'");

  if (const auto* v = get("model")) spec.models = detail::split_list(*v);
  if (const auto* v = get("n")) spec.n = detail::to_u64("n", *v);
  if (const auto* v = get("T")) spec.grid_size = detail::to_u64("T", *v);
  if (const auto* v = get("m")) spec.m = detail::to_u64("m", *v);
  if (const auto* v = get("epsilon")) {
    spec.epsilons.clear();
    for (const auto& item : detail::split_list(*v))
      spec.epsilons.push_back(detail::to_double("epsilon", item));
  }
  if (const auto* v = get("c")) {
    spec.severities.clear();
    for (const auto& item : detail::split_list(*v))
      spec.severities.push_back(detail::to_double("c", item));
  }
  if (const auto* v = get("methods")) {
    spec.methods.clear();
    for (const auto& item : detail::split_list(*v))
      spec.methods.push_back(parse_method(item));
  }
  if (const auto* v = get("L")) spec.direction_count_l = detail::to_u64("L", *v);
  if (const auto* v = get("M")) spec.direction_count_m = detail::to_u64("M", *v);
  if (const auto* v = get("rejection_cap"))
    spec.rejection_cap = detail::to_u64("rejection_cap", *v);
  if (const auto* v = get("replications"))
    spec.replications = detail::to_u64("replications", *v);
  if (const auto* v = get("seed")) spec.seed = detail::to_u64("seed", *v);
  if (const auto* v = get("n_test")) spec.n_test = detail::to_u64("n_test", *v);
  if (const auto* v = get("m_grid")) {
    spec.m_grid.clear();
    for (const auto& item : detail::split_list(*v))
      spec.m_grid.push_back(detail::to_u64("m_grid", item));
  }
  if (const auto* v = get("kw_self")) {
    if (*v == "loo") spec.kw_self = KwSelf::Loo;
    else if (*v == "include") spec.kw_self = KwSelf::Include;
    else throw ConfigError("spec: kw_self must be 'loo' or 'include'");
  }
  if (const auto* v = get("input")) spec.input_path = *v;
  if (const auto* v = get("out")) spec.output_path = *v;
  if (const auto* v = get("threads"))
    spec.threads = static_cast<unsigned>(detail::to_u64("threads", *v));
  return spec;
}

// Domain checks; throws ConfigError before any computation.
inline void validate_spec(const ExperimentSpec& spec) {
  auto expect_models = [&](char family, const char* what) {
    if (spec.models.empty())
      throw ConfigError(std::string("spec: experiment needs 'model' (") + what + ")");
    for (const auto& id : spec.models) {
      if (id.size() != 2 || id[0] != family || id[1] < '1' ||
          id[1] > (family == 'D' ? '6' : family == 'C' ? '3' : family == 'T' ? '4' : '6'))
        throw ConfigError("spec: model '" + id + "' invalid for this experiment");
    }
  };
  if (spec.grid_size < 2) throw ConfigError("spec: T must be >= 2");
  if (spec.replications < 1) throw ConfigError("spec: replications >= 1");
  if (spec.methods.empty())
    throw ConfigError("spec: 'methods' must name at least one depth");
  switch (spec.experiment) {
    case ExperimentKind::Outliers:
      expect_models('D', "D1..D6");
      if (spec.m > spec.n) throw ConfigError("spec: need m <= n");
      if (spec.n < 2) throw ConfigError("spec: need n >= 2");
      break;
    case ExperimentKind::Classify:
      expect_models('C', "C1..C3");
      if (spec.n < 2 || spec.n_test < 1)
        throw ConfigError("spec: need n >= 2 and n_test >= 1");
      break;
    case ExperimentKind::KwTest:
      expect_models('T', "T1..T4");
      if (spec.n < 4 || spec.n % 2 != 0)
        throw ConfigError("spec: kwtest needs even n >= 4");
      for (double c : spec.severities)
        if (!(c >= 0.0 && c <= 1.0))
          throw ConfigError("spec: severity c must lie in [0,1]");
      break;
    case ExperimentKind::Location:
      expect_models('L', "L1..L6");
      if (spec.n < 2) throw ConfigError("spec: need n >= 2");
      for (double e : spec.epsilons)
        if (!(e >= 0.0 && e < 0.5))
          throw ConfigError("spec: epsilon must lie in [0, 0.5)");
      break;
    case ExperimentKind::Converge: {
      if (spec.m_grid.empty()) throw ConfigError("spec: m_grid must be nonempty");
      for (std::size_t i = 1; i < spec.m_grid.size(); ++i)
        if (spec.m_grid[i] <= spec.m_grid[i - 1])
          throw ConfigError("spec: m_grid must be strictly increasing");
      for (const auto& m : spec.methods)
        if (m.method != Method::Rpd)
          throw ConfigError("spec: converge applies to rpd methods only");
      break;
    }
    case ExperimentKind::Depth:
      if (spec.input_path.empty())
        throw ConfigError("spec: depth experiment needs 'input'");
      if (spec.methods.size() != 1)
        throw ConfigError("spec: depth experiment needs exactly one method");
      break;
  }
}

}  // namespace fdepth
