#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ssem/assembly/constraints.hpp"
#include "ssem/assembly/smoother.hpp"
#include "ssem/error.hpp"
#include "ssem/harness/problems.hpp"
#include "ssem/parabolic/parabolic.hpp"
#include "ssem/solver/solver.hpp"

namespace ssem {

inline constexpr double machine_epsilon = 2.2e-16;

struct ExperimentConfig {
  std::string problem;
  std::vector<std::size_t> grids;
  std::vector<SmootherSpec> smoothers;
  /// Output path; empty means standard output.
  std::string out;
  std::uint64_t seed = 0;
  /// n for the parabolic time axis (n + 1 nodes).
  std::size_t time_nodes = 10;
};

struct ConvergenceRow {
  std::size_t m = 0;
  std::size_t n_omega = 0;
  std::size_t n_gamma = 0;
  std::string p;
  double l2_error = std::numeric_limits<double>::quiet_NaN();
  double linf_error = std::numeric_limits<double>::quiet_NaN();
  double cond = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  double residual_linf = std::numeric_limits<double>::quiet_NaN();
  double rhs_linf = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string message;

  /// Round-off dominates: cond * eps exceeds the error.
  bool at_floor() const { return !failed && cond * machine_epsilon > l2_error; }
};

/// Mean of u - exact over the listed flat indices.
[[nodiscard]] inline double mean_offset(std::span<const double> u, const TensorGrid& grid, const ScalarField& exact,
                                        std::span<const std::size_t> indices) {
  if (indices.empty()) throw EmptyDomain("mean_offset: no evaluation nodes");
  double s = 0.0;
  for (auto i : indices) s += u[i] - exact(grid.point(i));
  return s / static_cast<double>(indices.size());
}

/// RMS of u - exact - offset over the listed flat indices.
[[nodiscard]] inline double l2_error(std::span<const double> u, const TensorGrid& grid, const ScalarField& exact,
                                     std::span<const std::size_t> indices, double offset = 0.0) {
  if (indices.empty()) throw EmptyDomain("l2_error: no evaluation nodes");
  double s = 0.0;
  for (auto i : indices) {
    const double e = u[i] - exact(grid.point(i)) - offset;
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(indices.size()));
}

[[nodiscard]] inline double linf_error(std::span<const double> u, const TensorGrid& grid, const ScalarField& exact,
                                       std::span<const std::size_t> indices, double offset = 0.0) {
  if (indices.empty()) throw EmptyDomain("linf_error: no evaluation nodes");
  double s = 0.0;
  for (auto i : indices) s = std::max(s, std::abs(u[i] - exact(grid.point(i)) - offset));
  return s;
}

/// Negated least-squares slope of log(error) against log(m).
[[nodiscard]] inline double fit_order(std::span<const double> m, std::span<const double> error) {
  if (m.size() != error.size()) throw InvalidArgument("fit_order: size mismatch");
  if (m.size() < 3) throw InvalidArgument("fit_order: need at least three points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(error[i] > 0.0) || !(m[i] > 0.0)) throw InvalidArgument("fit_order: non-positive value");
    const double x = std::log(m[i]), y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw InvalidArgument("fit_order: grid sizes must be distinct");
  return -(n * sxy - sx * sy) / denom;
}

/// Order fitted over the rows above the conditioning floor (failed rows and
/// floor rows are skipped).
[[nodiscard]] inline double fit_convergence_order(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> m, e;
  for (const auto& r : rows) {
    if (r.failed || r.at_floor() || !(r.l2_error > 0.0)) continue;
    m.push_back(static_cast<double>(r.m));
    e.push_back(r.l2_error);
  }
  return fit_order(m, e);
}

namespace detail {

inline double linf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

inline void fill_from_report(ConvergenceRow& row, const SolveReport& rep, const ConstraintSystem& sys) {
  row.n_omega = rep.n_omega;
  row.n_gamma = rep.n_gamma;
  row.cond = rep.cond_estimate;
  row.residual_linf = rep.residual_linf;
  row.rhs_linf = linf(sys.rhs);
}

}  // namespace detail

/// Rows are ordered by m, then by smoother in config order. A solver error
/// marks its row failed and the sweep carries on.
[[nodiscard]] inline std::vector<ConvergenceRow> run_experiment(
    const ExperimentConfig& config, const std::function<void(const ConvergenceRow&)>& on_row = {}) {
  if (!problems::is_known(config.problem)) throw InvalidArgument("unknown problem '" + config.problem + "'");
  const bool parabolic = problems::is_parabolic(config.problem);
  std::vector<ConvergenceRow> rows;
  for (std::size_t m : config.grids) {
    for (const auto& spec : config.smoothers) {
      ConvergenceRow row;
      row.m = m;
      row.p = spec.label();
      const auto start = std::chrono::steady_clock::now();
      try {
        if (parabolic) {
          const auto problem = problems::parabolic_star();
          const auto st = make_spacetime_grid(m, config.time_nodes);
          const auto sys = assemble_parabolic(problem, st);
          const auto rep = pinv_solve(sys, Smoother(st.grid, spec));
          detail::fill_from_report(row, rep, sys);
          // Error over the space-time cylinder nodes, t = 0 included.
          std::vector<std::size_t> nodes;
          const std::size_t nt = st.time_size();
          for (auto s : sys.interior.indices)
            for (std::size_t j = 0; j < nt; ++j) nodes.push_back(s * nt + j);
          const ScalarField exact = [&problem](std::span<const double> x) { return problem.exact(x.first(2), x[2]); };
          row.l2_error = l2_error(rep.solution.values(), sys.grid, exact, nodes);
          row.linf_error = linf_error(rep.solution.values(), sys.grid, exact, nodes);
        } else {
          const auto problem = problems::elliptic(config.problem);
          const auto sys = assemble_elliptic(problem.domain, m, problem.op, problem.bc);
          const auto rep = pinv_solve(sys, spec);
          detail::fill_from_report(row, rep, sys);
          const auto u = rep.solution.values();
          const auto& nodes = sys.interior.indices;
          const double offset = problem.up_to_constant ? mean_offset(u, sys.grid, problem.exact, nodes) : 0.0;
          row.l2_error = l2_error(u, sys.grid, problem.exact, nodes, offset);
          row.linf_error = linf_error(u, sys.grid, problem.exact, nodes, offset);
        }
      } catch (const Error& e) {
        row.failed = true;
        row.message = e.what();
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (on_row) on_row(row);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace ssem
