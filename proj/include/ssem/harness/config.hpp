#pragma once

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssem/error.hpp"
#include "ssem/harness/experiment.hpp"
#include "ssem/harness/problems.hpp"

namespace ssem {

/// "a:b:s" (inclusive, step s), "a:b" (step 1), or a single integer.
[[nodiscard]] inline std::vector<std::size_t> parse_grid_range(const std::string& text) {
  const auto fail = [&] { return ConfigError("bad grid range '" + text + "' (expected lo:hi:step)"); };
  std::vector<long> parts;
  std::size_t pos = 0;
  while (true) {
    const auto colon = text.find(':', pos);
    const auto piece = text.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
    char* end = nullptr;
    const long v = std::strtol(piece.c_str(), &end, 10);
    if (piece.empty() || *end != '\0') throw fail();
    parts.push_back(v);
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() > 3) throw fail();
  const long lo = parts[0], hi = parts.size() > 1 ? parts[1] : parts[0], step = parts.size() > 2 ? parts[2] : 1;
  if (lo < 0 || hi < lo || step <= 0) throw fail();
  std::vector<std::size_t> out;
  for (long m = lo; m <= hi; m += step) out.push_back(static_cast<std::size_t>(m));
  return out;
}

/// Comma-separated numbers, e.g. "2,4,6,8".
[[nodiscard]] inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(piece.c_str(), &end);
    if (piece.empty() || *end != '\0' || !std::isfinite(v)) throw ConfigError("bad number list '" + text + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Checks the grid and smoother rules against the problem.
inline void validate(const ExperimentConfig& c) {
  if (!problems::is_known(c.problem)) {
    std::string known;
    for (const auto& id : problems::ids()) known += (known.empty() ? "" : ", ") + id;
    throw ConfigError("unknown problem '" + c.problem + "' (known: " + known + ")");
  }
  if (c.grids.empty()) throw ConfigError("grids: empty list");
  for (auto m : c.grids)
    if (m < 6) throw ConfigError("grids: m = " + std::to_string(m) + " is below the minimum of 6");
  if (c.smoothers.empty()) throw ConfigError("no smoother given");
  const double half_dim = 0.5 * static_cast<double>(problems::grid_dim(c.problem));
  for (const auto& s : c.smoothers)
    if (s.kind == SmootherKind::power && !(s.p > half_dim))
      throw ConfigError("p = " + s.label() + " must exceed d/2 = " + SmootherSpec::power(half_dim).label() + " for " +
                        c.problem);
  if (c.time_nodes < 1) throw ConfigError("time_nodes must be at least 1");
}

namespace detail {

template <class T>
T scalar_as(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("key '" + key + "': unexpected value");
  }
}

}  // namespace detail

/// Flat mapping with keys problem, grids, p_list, smoother, out, seed,
/// time_nodes. grids is "lo:hi:step" or a list; p_list is a list or "2,4,6".
/// smoother: power (default, needs p_list) or exp (takes no p_list).
[[nodiscard]] inline ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "config") {
  YAML::Node loaded;
  try {
    loaded = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  const YAML::Node& root = loaded;
  if (!root.IsMap()) throw ConfigError(origin + ": expected a key/value mapping at top level");

  static const std::set<std::string> allowed{"problem", "grids", "p_list", "smoother", "out", "seed", "time_nodes"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
    if (!kv.second.IsScalar() && !(kv.second.IsSequence() && (key == "grids" || key == "p_list")))
      throw ConfigError(origin + ": key '" + key + "' has the wrong shape");
  }

  ExperimentConfig c;
  if (!root["problem"]) throw ConfigError(origin + ": missing key 'problem'");
  c.problem = detail::scalar_as<std::string>(root["problem"], "problem");

  if (!root["grids"]) throw ConfigError(origin + ": missing key 'grids'");
  if (const auto g = root["grids"]; g.IsSequence()) {
    for (const auto& v : g) {
      const long m = detail::scalar_as<long>(v, "grids");
      if (m < 0) throw ConfigError("grids: negative value");
      c.grids.push_back(static_cast<std::size_t>(m));
    }
  } else {
    c.grids = parse_grid_range(detail::scalar_as<std::string>(g, "grids"));
  }

  const std::string kind = root["smoother"] ? detail::scalar_as<std::string>(root["smoother"], "smoother") : "power";
  if (kind == "exp") {
    if (root["p_list"]) throw ConfigError(origin + ": p_list does not apply to the exp smoother");
    c.smoothers.push_back(SmootherSpec::exponential());
  } else if (kind == "power") {
    if (!root["p_list"]) throw ConfigError(origin + ": missing key 'p_list'");
    std::vector<double> ps;
    if (const auto pl = root["p_list"]; pl.IsSequence()) {
      for (const auto& v : pl) ps.push_back(detail::scalar_as<double>(v, "p_list"));
    } else {
      ps = parse_number_list(detail::scalar_as<std::string>(pl, "p_list"));
    }
    if (ps.empty()) throw ConfigError(origin + ": p_list is empty");
    for (double p : ps) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("p_list: invalid value");
      c.smoothers.push_back(SmootherSpec::power(p));
    }
  } else {
    throw ConfigError(origin + ": smoother must be 'power' or 'exp', got '" + kind + "'");
  }

  if (root["out"]) c.out = detail::scalar_as<std::string>(root["out"], "out");
  if (root["seed"]) c.seed = detail::scalar_as<std::uint64_t>(root["seed"], "seed");
  if (root["time_nodes"]) {
    const long n = detail::scalar_as<long>(root["time_nodes"], "time_nodes");
    if (n < 1) throw ConfigError("time_nodes must be at least 1");
    c.time_nodes = static_cast<std::size_t>(n);
  }
  validate(c);
  return c;
}

[[nodiscard]] inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace ssem
