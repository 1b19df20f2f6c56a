#pragma once

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "meanforge/harness.hpp"

namespace testing_support {

using meanforge::Complex;
using meanforge::HpdMatrix;
using meanforge::Matrix;
using meanforge::RealVector;

inline Matrix random_complex(int rows, int cols, meanforge::Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      a(r, c) = Complex(re, im);
    }
  return a;
}

inline Matrix random_hermitian(int n, meanforge::Rng& rng) {
  const Matrix a = random_complex(n, n, rng);
  return (a + a.adjoint()) * 0.5;
}

inline Matrix diag(std::initializer_list<double> values) {
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(values.size()),
                          static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) d(i, i) = v, ++i;
  return d;
}

inline Matrix real2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

/// Reference spectral calculus through Eigen's own Hermitian solver.
template <class F>
Matrix oracle_function(const Matrix& a, F f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  RealVector lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = f(lam(i));
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

inline RealVector oracle_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Thompson distance computed with the reference solver.
inline double oracle_thompson(const Matrix& a, const Matrix& b) {
  const Matrix ah = oracle_function(a, [](double x) { return 1.0 / std::sqrt(x); });
  const RealVector lam = oracle_eigenvalues(ah * b * ah);
  return std::max(std::abs(std::log(lam(0))), std::abs(std::log(lam(lam.size() - 1))));
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / (1.0 + b.norm());
}

}  // namespace testing_support
