#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ssem/assembly/constraints.hpp"
#include "ssem/assembly/smoother.hpp"
#include "ssem/error.hpp"

namespace ssem {

/// Pivots below this fraction of ||M||_2 mark the system rank deficient.
inline constexpr double rank_tolerance = 1e-13;

/// Thin Householder QR of a tall matrix, kept in compact reflector form.
class QRFactorization {
 public:
  QRFactorization() = default;
  explicit QRFactorization(const Eigen::MatrixXd& m) : qr_(m), rows_(m.rows()), cols_(m.cols()) {}

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }

  /// rows x cols, orthonormal columns.
  [[nodiscard]] Eigen::MatrixXd Q() const {
    return qr_.householderQ() * Eigen::MatrixXd::Identity(rows_, cols_);
  }

  [[nodiscard]] Eigen::MatrixXd R() const {
    return qr_.matrixQR().topRows(cols_).triangularView<Eigen::Upper>();
  }

  /// Q z for z of length cols, without forming Q.
  [[nodiscard]] Eigen::VectorXd apply_Q(const Eigen::VectorXd& z) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(rows_);
    w.head(cols_) = z;
    return qr_.householderQ() * w;
  }

  /// Solves R^T z = b by forward substitution.
  [[nodiscard]] Eigen::VectorXd solve_RT(const Eigen::VectorXd& b) const {
    return qr_.matrixQR().topRows(cols_).triangularView<Eigen::Upper>().transpose().solve(b);
  }

  [[nodiscard]] Eigen::VectorXd diagonal() const { return qr_.matrixQR().diagonal(); }

 private:
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
};

namespace detail {

/// ||R||_2 by power iteration on R^T R from a fixed start vector.
inline double spectral_norm_estimate(const Eigen::MatrixXd& r) {
  if (r.size() == 0) return 0.0;
  const auto tri = r.triangularView<Eigen::Upper>();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(r.cols()).normalized();
  double sigma = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd w = tri.transpose() * (tri * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    const double next = std::sqrt(n);
    v = w / n;
    if (std::abs(next - sigma) <= 1e-8 * next) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace detail

/// Throws RankDeficient naming the first column with |R_ii| below the tolerance.
[[nodiscard]] inline QRFactorization householder_qr(const Eigen::MatrixXd& m) {
  if (m.rows() < m.cols())
    throw UnderResolved("householder_qr: matrix has more columns than rows");
  QRFactorization f(m);
  const Eigen::MatrixXd r = f.R();
  const double norm = detail::spectral_norm_estimate(r);
  const Eigen::VectorXd diag = f.diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (!(std::abs(diag(i)) >= rank_tolerance * norm))
      throw RankDeficient(static_cast<std::size_t>(i),
                          "householder_qr: rank deficient at constraint " + std::to_string(i));
  return f;
}

namespace detail {

inline double kappa_from_singular_values(const Eigen::VectorXd& s) {
  if (s.size() == 0) return 1.0;
  const double smax = s.maxCoeff(), smin = s.minCoeff();
  if (!(smin > smax * std::numeric_limits<double>::epsilon())) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace detail

/// kappa_2 = sigma_max / sigma_min; +inf when sigma_min is at round-off level.
[[nodiscard]] inline double condition_estimate(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return detail::kappa_from_singular_values(svd.singularValues());
}

/// kappa_2 of M from its R factor (M and R share singular values).
[[nodiscard]] inline double condition_estimate(const QRFactorization& f) {
  return condition_estimate(f.R());
}

struct SolveReport {
  GridFunction solution;
  double residual_l2 = 0.0;
  double residual_linf = 0.0;
  double cond_estimate = 0.0;
  std::size_t n_omega = 0;
  std::size_t n_gamma = 0;
  double seconds = 0.0;
};

/// u = S^{-1/2} Q (R^T)^{-1} b, where Q R = S^{-1/2} C^T: the minimizer of
/// ||S^{1/2} u|| subject to C u = b.
[[nodiscard]] inline SolveReport pinv_solve(const ConstraintSystem& system, const Smoother& smoother,
                                            bool with_condition = true) {
  const auto start = std::chrono::steady_clock::now();
  if (system.rhs.size() != system.rows()) throw InvalidArgument("pinv_solve: rhs length mismatch");
  const Eigen::MatrixXd m = materialize_M(system, smoother);
  const QRFactorization f = householder_qr(m);
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(system.rhs.data(), static_cast<Eigen::Index>(system.rhs.size()));
  const Eigen::VectorXd w = f.apply_Q(f.solve_RT(b));
  GridFunction wg(system.grid.shape(), std::vector<double>(w.data(), w.data() + w.size()));

  SolveReport report;
  report.solution = smoother.half_inverse(wg);
  report.cond_estimate = with_condition ? condition_estimate(f) : std::numeric_limits<double>::quiet_NaN();
  const auto cu = system.apply(report.solution.values());
  double l2 = 0.0, linf = 0.0;
  for (std::size_t i = 0; i < cu.size(); ++i) {
    const double r = cu[i] - system.rhs[i];
    l2 += r * r;
    linf = std::max(linf, std::abs(r));
  }
  report.residual_l2 = std::sqrt(l2);
  report.residual_linf = linf;
  report.n_omega = system.n_omega;
  report.n_gamma = system.n_gamma;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

[[nodiscard]] inline SolveReport pinv_solve(const ConstraintSystem& system, const SmootherSpec& spec,
                                            bool with_condition = true) {
  return pinv_solve(system, Smoother(system.grid, spec), with_condition);
}

}  // namespace ssem
