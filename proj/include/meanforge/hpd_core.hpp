#pragma once

// Dense complex Hermitian linear algebra on small matrices: a cyclic Jacobi
// eigensolver, spectral matrix functions, Loewner comparison, the Thompson
// metric and unitarily invariant norms.

#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "meanforge/errors.hpp"

namespace meanforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Largest entry modulus; 0 for an empty matrix.
double max_abs(const Matrix& a);

/// max |A_ij - conj(A_ji)|.
double hermitian_defect(const Matrix& a);

/// True when A is square and hermitian_defect(A) <= 1e-12 * max_abs(A).
bool is_hermitian(const Matrix& a);

/// (A + A^*) / 2, after checking that A is Hermitian within tolerance.
/// Throws NonHermitian otherwise.
Matrix hermitize(const Matrix& a);

/// Hermitian positive definite matrix. Construction through `checked`
/// verifies symmetry and lambda_min > 0; `trusted` only symmetrizes and is
/// meant for results of operations that preserve positivity.
class HpdMatrix {
 public:
  static HpdMatrix checked(const Matrix& a);
  static HpdMatrix trusted(const Matrix& a);
  static HpdMatrix identity(int n);
  static HpdMatrix scalar(int n, double c);

  const Matrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  operator const Matrix&() const noexcept { return m_; }

 private:
  explicit HpdMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix unitary;          // columns are eigenvectors

  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }

  /// U f(diag lambda) U^*.
  template <class F>
  Matrix apply(F&& f) const {
    const auto n = eigenvalues.size();
    Matrix scaled = unitary;
    for (Eigen::Index j = 0; j < n; ++j) scaled.col(j) *= f(eigenvalues(j));
    Matrix out = scaled * unitary.adjoint();
    return (out + out.adjoint()) * 0.5;
  }
};

struct JacobiOptions {
  double relative_threshold = 1e-14;
  int max_sweeps = 100;
};

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix.
/// Eigenvalues ascend; each eigenvector's first component with modulus above
/// 1e-10 is made real positive. Throws NonHermitian or NoConvergence.
EigenDecomposition eigh(const Matrix& a, const JacobiOptions& options = {});

/// Eigenvalues only (ascending).
RealVector eigvalsh(const Matrix& a);

struct MatrixFunction {
  enum class Kind { Power, Log, Exp, Sqrt, Inverse };
  Kind kind;
  double exponent = 1.0;

  static MatrixFunction power(double r) { return {Kind::Power, r}; }
  static MatrixFunction log() { return {Kind::Log, 0.0}; }
  static MatrixFunction exp() { return {Kind::Exp, 0.0}; }
  static MatrixFunction sqrt() { return {Kind::Sqrt, 0.5}; }
  static MatrixFunction inverse() { return {Kind::Inverse, -1.0}; }

  /// Whether f is only defined on strictly positive spectra.
  bool needs_positive() const;
  double operator()(double x) const;
};

/// f(A) by spectral calculus. Throws DomainError when f requires a positive
/// spectrum and lambda_min(A) <= 0.
Matrix matrix_function(const Matrix& a, MatrixFunction f);
Matrix matrix_function(const EigenDecomposition& eig, MatrixFunction f);

Matrix matrix_power(const Matrix& a, double r);
Matrix matrix_log(const Matrix& a);
Matrix matrix_exp(const Matrix& a);
Matrix matrix_sqrt(const Matrix& a);
Matrix matrix_inverse(const Matrix& a);

struct LoewnerResult {
  double slack = 0.0;  // lambda_min(R - L)
  double scale = 1.0;  // 1 + lambda_max(|L|) + lambda_max(|R|)
  bool holds = false;

  double relative_slack() const { return slack / scale; }
};

inline constexpr double kDefaultLoewnerTol = 1e-9;

/// Tests L <= R. holds iff slack >= -tol_rel * scale.
LoewnerResult loewner_slack(const Matrix& lhs, const Matrix& rhs,
                            double tol_rel = kDefaultLoewnerTol);

/// Same test with the spectral radii of L and R already known.
LoewnerResult loewner_slack_with_radii(const Matrix& lhs, const Matrix& rhs, double lhs_radius,
                                       double rhs_radius, double tol_rel);

/// Spectral norm of log(A^{-1/2} B A^{-1/2}).
double thompson_distance(const HpdMatrix& a, const HpdMatrix& b);
double thompson_distance(const EigenDecomposition& a_eig, const Matrix& b);

struct SpectralBounds {
  double m;
  double M;
};

SpectralBounds spectral_bounds(const HpdMatrix& a);

class NormKind {
 public:
  enum class Kind { Spectral, Trace, Frobenius, KyFan };

  static NormKind spectral() { return NormKind(Kind::Spectral, 0); }
  static NormKind trace() { return NormKind(Kind::Trace, 0); }
  static NormKind frobenius() { return NormKind(Kind::Frobenius, 0); }
  static NormKind ky_fan(int k) { return NormKind(Kind::KyFan, k); }

  /// Accepts "spectral", "trace", "frobenius", "kyfan:K" / "kyfanK".
  static NormKind parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  int k() const noexcept { return k_; }
  std::string name() const;

  friend bool operator==(const NormKind&, const NormKind&) = default;

 private:
  NormKind(Kind kind, int k) : kind_(kind), k_(k) {}
  Kind kind_;
  int k_;
};

/// Singular values in descending order. Hermitian inputs use eigenvalue
/// moduli; general inputs use the Hermitian dilation [[0, A], [A^*, 0]].
RealVector singular_values(const Matrix& a);

/// Throws BadK when a Ky Fan k lies outside [1, min(rows, cols)].
double ui_norm(const Matrix& a, NormKind kind);

/// Spectral norm (largest singular value).
double operator_norm(const Matrix& a);

}  // namespace meanforge
