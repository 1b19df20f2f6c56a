#include "meanforge/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace meanforge {

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw Error(ErrorCode::BadParameter, "weight vector is empty");
  double sum = 0.0;
  for (double w : w_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::BadParameter, "weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadParameter, "weights sum to " + std::to_string(sum));
  }
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::BadParameter, "weight vector is empty");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return WeightVector(std::move(w));
}

MatrixTuple::MatrixTuple(std::vector<HpdMatrix> matrices, WeightVector weights,
                         std::optional<SpectralBounds> bounds)
    : matrices_(std::move(matrices)), weights_(std::move(weights)), bounds_{0.0, 0.0} {
  if (matrices_.empty()) throw Error(ErrorCode::BadParameter, "tuple is empty");
  if (matrices_.size() != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(matrices_.size()) + " matrices but " +
                    std::to_string(weights_.size()) + " weights");
  }
  const int n = matrices_.front().dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& a : matrices_) {
    if (a.dim() != n) throw Error(ErrorCode::DimensionMismatch, "tuple dimensions differ");
    const auto b = spectral_bounds(a);
    lo = std::min(lo, b.m);
    hi = std::max(hi, b.M);
  }
  if (!bounds) {
    bounds_ = {lo, hi};
    return;
  }
  const auto [m, M] = *bounds;
  if (!(m > 0.0) || !(m <= M)) {
    throw Error(ErrorCode::BadBounds, "need 0 < m <= M");
  }
  const double eps = 1e-10 * std::max(1.0, M);
  if (lo < m - eps || hi > M + eps) {
    throw Error(ErrorCode::BadBounds, "spectra [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] escape [" + std::to_string(m) +
                                          ", " + std::to_string(M) + "]");
  }
  bounds_ = *bounds;
}

MatrixTuple MatrixTuple::inverse() const {
  std::vector<HpdMatrix> inv;
  inv.reserve(matrices_.size());
  for (const auto& a : matrices_) inv.push_back(HpdMatrix::trusted(matrix_inverse(a)));
  return MatrixTuple(std::move(inv), weights_, SpectralBounds{1.0 / bounds_.M, 1.0 / bounds_.m});
}

HpdMatrix arithmetic_mean(const MatrixTuple& tuple) {
  Matrix sum = Matrix::Zero(tuple.dim(), tuple.dim());
  for (std::size_t i = 0; i < tuple.size(); ++i) sum += tuple.weights()[i] * tuple[i].matrix();
  return HpdMatrix::trusted(sum);
}

HpdMatrix harmonic_mean(const MatrixTuple& tuple) {
  Matrix sum = Matrix::Zero(tuple.dim(), tuple.dim());
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple.weights()[i] == 0.0) continue;
    sum += tuple.weights()[i] * matrix_inverse(tuple[i]);
  }
  return HpdMatrix::trusted(matrix_inverse(sum));
}

Matrix geometric_mean_from(const EigenDecomposition& x_eig, const Matrix& b, double t) {
  const Matrix half = x_eig.apply([](double x) { return std::sqrt(x); });
  const Matrix inv_half = x_eig.apply([](double x) { return 1.0 / std::sqrt(x); });
  const Matrix inner = matrix_power(inv_half * b * inv_half, t);
  return half * inner * half;
}

HpdMatrix two_mean(const HpdMatrix& a, const HpdMatrix& b, double t, TwoMeanKind kind) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::BadT, "t must lie in [0, 1]");
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "two_mean dimensions differ");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  switch (kind) {
    case TwoMeanKind::Arithmetic:
      return HpdMatrix::trusted((1.0 - t) * a.matrix() + t * b.matrix());
    case TwoMeanKind::Geometric:
      return HpdMatrix::trusted(geometric_mean_from(eigh(a), b, t));
    case TwoMeanKind::Harmonic:
      return HpdMatrix::trusted(
          matrix_inverse((1.0 - t) * matrix_inverse(a) + t * matrix_inverse(b)));
  }
  return a;
}

namespace {

Matrix power_map_from(const EigenDecomposition& x_eig, const MatrixTuple& tuple, double t) {
  const auto n = x_eig.eigenvalues.size();
  const Matrix half = x_eig.apply([](double x) { return std::sqrt(x); });
  const Matrix inv_half = x_eig.apply([](double x) { return 1.0 / std::sqrt(x); });
  Matrix inner = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const double w = tuple.weights()[i];
    if (w == 0.0) continue;
    inner += w * matrix_power(inv_half * tuple[i].matrix() * inv_half, t);
  }
  return half * inner * half;
}

void check_power_t(double t) {
  if (!(t >= -1.0 && t <= 1.0) || t == 0.0) {
    throw Error(ErrorCode::BadT, "power mean needs t in [-1, 1] \\ {0}, got " + std::to_string(t));
  }
}

}  // namespace

HpdMatrix power_mean_map(const HpdMatrix& x, const MatrixTuple& tuple, double t) {
  if (x.dim() != tuple.dim()) throw Error(ErrorCode::DimensionMismatch, "X and tuple differ");
  return HpdMatrix::trusted(power_map_from(eigh(x), tuple, t));
}

MeanResult power_mean(const MatrixTuple& tuple, double t, const SolverOptions& options) {
  check_power_t(t);
  if (tuple.size() == 1) return {tuple[0], SolveReport{0, 0.0, 0.0, true}};
  if (t == 1.0) return {arithmetic_mean(tuple), SolveReport{0, 0.0, 0.0, true}};
  if (t == -1.0) return {harmonic_mean(tuple), SolveReport{0, 0.0, 0.0, true}};
  if (t < 0.0) {
    MeanResult dual = power_mean(tuple.inverse(), -t, options);
    return {HpdMatrix::trusted(matrix_inverse(dual.mean)), dual.report};
  }

  HpdMatrix x = arithmetic_mean(tuple);
  EigenDecomposition x_eig = eigh(x);
  SolveReport report;
  // The map contracts by 1 - t, so the distance to the fixed point is at most
  // step (1 - t) / t. Iterate until that bound meets step_tol, or until the
  // steps stop shrinking below step_tol (round-off floor).
  const double target = options.step_tol * std::min(1.0, t / (1.0 - t));
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= options.max_iterations; ++k) {
    HpdMatrix next = HpdMatrix::trusted(power_map_from(x_eig, tuple, t));
    report.final_step = thompson_distance(x_eig, next);
    report.iterations = k;
    x = std::move(next);
    x_eig = eigh(x);
    const bool stalled = report.final_step <= options.step_tol && report.final_step >= previous;
    previous = report.final_step;
    if (report.final_step <= target || stalled) {
      report.residual = thompson_distance(x_eig, power_map_from(x_eig, tuple, t));
      report.converged = report.residual <= options.certificate_tol;
      if (!report.converged) {
        throw Error(ErrorCode::NoConvergence,
                    "power mean certificate " + std::to_string(report.residual));
      }
      return {std::move(x), report};
    }
  }
  throw Error(ErrorCode::NoConvergence, "power mean exceeded " +
                                            std::to_string(options.max_iterations) +
                                            " iterations (last step " +
                                            std::to_string(report.final_step) + ")");
}

namespace {

// sum_i w_i log(X^{-1/2} A_i X^{-1/2}), the negated form of the Karcher equation.
Matrix karcher_gradient(const Matrix& inv_half, const MatrixTuple& tuple) {
  const auto n = inv_half.rows();
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const double w = tuple.weights()[i];
    if (w == 0.0) continue;
    sum += w * matrix_log(inv_half * tuple[i].matrix() * inv_half);
  }
  return (sum + sum.adjoint()) * 0.5;
}

}  // namespace

MeanResult karcher_mean(const MatrixTuple& tuple, const SolverOptions& options) {
  if (tuple.size() == 1) return {tuple[0], SolveReport{0, 0.0, 0.0, true}};
  const double contract_tol = options.karcher_residual_tol * tuple.dim();

  HpdMatrix x = arithmetic_mean(tuple);
  EigenDecomposition x_eig = eigh(x);
  Matrix half = x_eig.apply([](double v) { return std::sqrt(v); });
  Matrix grad = karcher_gradient(x_eig.apply([](double v) { return 1.0 / std::sqrt(v); }), tuple);
  double residual = grad.norm();

  SolveReport report;
  double theta = 1.0;
  constexpr double kThetaFloor = 1.0 / 64.0;
  for (int k = 1; k <= options.max_iterations && residual > options.karcher_stop_tol; ++k) {
    report.iterations = k;
    const EigenDecomposition step_eig = eigh(theta * grad);
    HpdMatrix candidate =
        HpdMatrix::trusted(half * step_eig.apply([](double v) { return std::exp(v); }) * half);
    EigenDecomposition cand_eig = eigh(candidate);
    Matrix cand_grad =
        karcher_gradient(cand_eig.apply([](double v) { return 1.0 / std::sqrt(v); }), tuple);
    const double cand_residual = cand_grad.norm();
    if (cand_residual > residual) {
      if (theta > kThetaFloor) {
        theta *= 0.5;
        continue;
      }
      if (residual <= contract_tol) break;
    }
    report.final_step =
        std::max(std::abs(step_eig.min()), std::abs(step_eig.max()));
    x = std::move(candidate);
    x_eig = std::move(cand_eig);
    half = x_eig.apply([](double v) { return std::sqrt(v); });
    grad = std::move(cand_grad);
    residual = cand_residual;
  }
  report.residual = residual;
  report.converged = residual <= contract_tol;
  if (!report.converged) {
    throw Error(ErrorCode::NoConvergence,
                "Karcher residual " + std::to_string(residual) + " after " +
                    std::to_string(report.iterations) + " iterations");
  }
  return {std::move(x), report};
}

double karcher_residual(const HpdMatrix& x, const MatrixTuple& tuple) {
  if (x.dim() != tuple.dim()) throw Error(ErrorCode::DimensionMismatch, "X and tuple differ");
  const EigenDecomposition x_eig = eigh(x);
  const Matrix half = x_eig.apply([](double v) { return std::sqrt(v); });
  Matrix sum = Matrix::Zero(x.dim(), x.dim());
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const double w = tuple.weights()[i];
    if (w == 0.0) continue;
    sum += w * matrix_log(half * matrix_inverse(tuple[i]) * half);
  }
  return sum.norm();
}

std::vector<std::pair<double, double>> power_mean_limit_check(const MatrixTuple& tuple,
                                                              const std::vector<double>& t_seq,
                                                              const SolverOptions& options) {
  const MeanResult lambda = karcher_mean(tuple, options);
  std::vector<std::pair<double, double>> out;
  out.reserve(t_seq.size());
  for (double t : t_seq) {
    if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::BadT, "limit check needs t in (0, 1]");
    const MeanResult p = power_mean(tuple, t, options);
    out.emplace_back(t, thompson_distance(p.mean, lambda.mean));
  }
  return out;
}

}  // namespace meanforge
