#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ssem/error.hpp"
#include "ssem/harness/experiment.hpp"

namespace ssem {

inline constexpr const char* csv_header = "m,n_omega,n_gamma,p,l2_error,linf_error,cond,seconds";

namespace detail {

inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline void check_written(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace detail

inline void write_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << csv_header << '\n';
  for (const auto& r : rows)
    out << r.m << ',' << r.n_omega << ',' << r.n_gamma << ',' << r.p << ',' << detail::fmt17(r.l2_error) << ','
        << detail::fmt17(r.linf_error) << ',' << detail::fmt17(r.cond) << ',' << detail::fmt17(r.seconds) << '\n';
}

inline void write_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  auto out = detail::open_for_write(path);
  write_csv(rows, out);
  detail::check_written(out, path);
}

/// Rows with a non-finite l2_error are read back as failed.
[[nodiscard]] inline std::vector<ConvergenceRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != csv_header) throw IoError("'" + path + "' does not start with the expected header");
  std::vector<ConvergenceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 8) throw IoError(path + ":" + std::to_string(lineno) + ": expected 8 fields");
    try {
      ConvergenceRow r;
      r.m = std::stoul(f[0]);
      r.n_omega = std::stoul(f[1]);
      r.n_gamma = std::stoul(f[2]);
      r.p = f[3];
      r.l2_error = std::stod(f[4]);
      r.linf_error = std::stod(f[5]);
      r.cond = std::stod(f[6]);
      r.seconds = std::stod(f[7]);
      r.failed = !std::isfinite(r.l2_error);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

/// Plain columnar series, gnuplot-style: each block starts with a
/// "# series <name> p=<p>" line and blocks are separated by two blank lines.
/// Per p: (m, l2_error), (m, cond), and the reference lines m^-p and m^p
/// anchored at the first point of the error and condition series.
inline void emit_plot_data(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ConvergenceRow*>> by_p;
  for (const auto& r : rows) {
    if (r.failed) continue;
    if (!by_p.count(r.p)) order.push_back(r.p);
    by_p[r.p].push_back(&r);
  }
  bool first = true;
  const auto block = [&](const std::string& name, const std::string& p, const std::string& ycol,
                         const std::vector<std::pair<double, double>>& pts) {
    if (!first) out << "\n\n";
    first = false;
    out << "# series " << name << " p=" << p << '\n' << "# m " << ycol << '\n';
    for (const auto& [x, y] : pts) out << detail::fmt17(x) << ' ' << detail::fmt17(y) << '\n';
  };
  for (const auto& p : order) {
    const auto& rs = by_p[p];
    std::vector<std::pair<double, double>> err, cond;
    for (const auto* r : rs) {
      err.emplace_back(static_cast<double>(r->m), r->l2_error);
      cond.emplace_back(static_cast<double>(r->m), r->cond);
    }
    block("l2_error", p, "l2_error", err);
    block("cond", p, "cond", cond);
    char* end = nullptr;
    const double pv = std::strtod(p.c_str(), &end);
    if (end == p.c_str() || *end != '\0' || err.empty()) continue;
    const double m0 = err.front().first;
    std::vector<std::pair<double, double>> decay, growth;
    for (const auto& [m, e] : err) {
      decay.emplace_back(m, err.front().second * std::pow(m / m0, -pv));
      growth.emplace_back(m, cond.front().second * std::pow(m / m0, pv));
    }
    block("reference_decay", p, "m^-p", decay);
    block("reference_growth", p, "m^p", growth);
  }
}

inline void emit_plot_data(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  auto out = detail::open_for_write(path);
  emit_plot_data(rows, out);
  detail::check_written(out, path);
}

}  // namespace ssem
