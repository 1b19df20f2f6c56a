#pragma once

// Two-matrix means and the n-matrix power and Karcher means.

#include <optional>
#include <utility>
#include <vector>

#include "meanforge/hpd_core.hpp"

namespace meanforge {

/// Nonnegative weights summing to one within 1e-12.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);
  static WeightVector uniform(std::size_t n);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const noexcept { return w_; }

 private:
  std::vector<double> w_;
};

/// n-tuple of HPD matrices of a common dimension with weights and spectral
/// bounds m <= A_i <= M.
class MatrixTuple {
 public:
  /// Bounds default to (min_i lambda_min(A_i), max_i lambda_max(A_i)).
  MatrixTuple(std::vector<HpdMatrix> matrices, WeightVector weights,
              std::optional<SpectralBounds> bounds = std::nullopt);

  std::size_t size() const noexcept { return matrices_.size(); }
  int dim() const noexcept { return matrices_.front().dim(); }
  const HpdMatrix& operator[](std::size_t i) const { return matrices_[i]; }
  const std::vector<HpdMatrix>& matrices() const noexcept { return matrices_; }
  const WeightVector& weights() const noexcept { return weights_; }
  SpectralBounds bounds() const noexcept { return bounds_; }

  /// (A_1^{-1}, ..., A_n^{-1}) with bounds (1/M, 1/m).
  MatrixTuple inverse() const;

 private:
  std::vector<HpdMatrix> matrices_;
  WeightVector weights_;
  SpectralBounds bounds_;
};

struct SolveReport {
  int iterations = 0;
  double final_step = 0.0;  // Thompson distance of the last update
  double residual = 0.0;
  bool converged = false;
};

struct MeanResult {
  HpdMatrix mean;
  SolveReport report;
};

struct SolverOptions {
  double step_tol = 1e-13;          // power mean: bound on d_T(X_k, P_t) at exit
  double certificate_tol = 1e-10;   // power mean: d_T(X, F(X))
  double karcher_stop_tol = 1e-12;  // Karcher: stop once the residual is this small
  double karcher_residual_tol = 1e-9;  // multiplied by dim for the contract
  int max_iterations = 10000;
};

enum class TwoMeanKind { Arithmetic, Geometric, Harmonic };

HpdMatrix arithmetic_mean(const MatrixTuple& tuple);
HpdMatrix harmonic_mean(const MatrixTuple& tuple);

/// A nabla_t B, A #_t B or A !_t B. Throws BadT when t is outside [0, 1].
HpdMatrix two_mean(const HpdMatrix& a, const HpdMatrix& b, double t, TwoMeanKind kind);

inline HpdMatrix geometric_mean(const HpdMatrix& a, const HpdMatrix& b, double t = 0.5) {
  return two_mean(a, b, t, TwoMeanKind::Geometric);
}

/// X #_t B with the eigendecomposition of X already available.
Matrix geometric_mean_from(const EigenDecomposition& x_eig, const Matrix& b, double t);

/// sum_i w_i (X #_t A_i), the map whose fixed point is P_t for t in (0, 1].
HpdMatrix power_mean_map(const HpdMatrix& x, const MatrixTuple& tuple, double t);

/// P_t for t in [-1, 1] \ {0}. Throws BadT or NoConvergence.
MeanResult power_mean(const MatrixTuple& tuple, double t, const SolverOptions& options = {});

/// Karcher mean Lambda. Throws NoConvergence.
MeanResult karcher_mean(const MatrixTuple& tuple, const SolverOptions& options = {});

/// || sum_i w_i log(X^{1/2} A_i^{-1} X^{1/2}) ||_F.
double karcher_residual(const HpdMatrix& x, const MatrixTuple& tuple);

/// (t, d_T(P_t, Lambda)) for each t in t_seq, all in (0, 1].
std::vector<std::pair<double, double>> power_mean_limit_check(
    const MatrixTuple& tuple, const std::vector<double>& t_seq, const SolverOptions& options = {});

}  // namespace meanforge
