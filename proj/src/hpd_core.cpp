#include "meanforge/hpd_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace meanforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::BadT: return "BadT";
    case ErrorCode::BadBounds: return "BadBounds";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::UnknownCheck: return "UnknownCheck";
    case ErrorCode::ParamOutOfDomain: return "ParamOutOfDomain";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermitian_defect(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a) {
  return a.rows() == a.cols() && hermitian_defect(a) <= 1e-12 * max_abs(a);
}

Matrix hermitize(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw Error(ErrorCode::DomainError, "matrix has non-finite entries");
  const double defect = hermitian_defect(a);
  if (defect > 1e-12 * max_abs(a)) {
    throw Error(ErrorCode::NonHermitian, "asymmetry " + std::to_string(defect));
  }
  return (a + a.adjoint()) * 0.5;
}

HpdMatrix HpdMatrix::checked(const Matrix& a) {
  Matrix h = hermitize(a);
  if (h.rows() == 0) throw Error(ErrorCode::DomainError, "empty matrix");
  const double lmin = eigvalsh(h)(0);
  if (!(lmin > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "matrix is not positive definite (lambda_min = " + std::to_string(lmin) + ")");
  }
  return HpdMatrix(std::move(h));
}

HpdMatrix HpdMatrix::trusted(const Matrix& a) { return HpdMatrix((a + a.adjoint()) * 0.5); }

HpdMatrix HpdMatrix::identity(int n) { return HpdMatrix(Matrix::Identity(n, n)); }

HpdMatrix HpdMatrix::scalar(int n, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::DomainError, "scalar must be positive");
  return HpdMatrix(Matrix::Identity(n, n) * c);
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  const auto n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // J = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q).
  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const auto n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace

EigenDecomposition eigh(const Matrix& input, const JacobiOptions& options) {
  Matrix a = hermitize(input);
  const auto n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  const double threshold = options.relative_threshold * a.norm();

  bool converged = false;
  for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence,
                "Jacobi exceeded " + std::to_string(options.max_sweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.unitary.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.eigenvalues(j) = a(src, src).real();
    out.unitary.col(j) = v.col(src);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mod = std::abs(out.unitary(i, j));
      if (mod > 1e-10) {
        out.unitary.col(j) *= std::conj(out.unitary(i, j)) / mod;
        out.unitary(i, j) = mod;
        break;
      }
    }
  }
  return out;
}

RealVector eigvalsh(const Matrix& a) { return eigh(a).eigenvalues; }

bool MatrixFunction::needs_positive() const {
  switch (kind) {
    case Kind::Log:
    case Kind::Sqrt:
    case Kind::Inverse: return true;
    case Kind::Exp: return false;
    case Kind::Power: return exponent < 0.0 || exponent != std::floor(exponent);
  }
  return true;
}

double MatrixFunction::operator()(double x) const {
  switch (kind) {
    case Kind::Power:
      if (exponent == 1.0) return x;
      if (exponent == 2.0) return x * x;
      if (exponent == -1.0) return 1.0 / x;
      if (exponent == 0.5) return std::sqrt(x);
      return std::pow(x, exponent);
    case Kind::Log: return std::log(x);
    case Kind::Exp: return std::exp(x);
    case Kind::Sqrt: return std::sqrt(x);
    case Kind::Inverse: return 1.0 / x;
  }
  return x;
}

Matrix matrix_function(const EigenDecomposition& eig, MatrixFunction f) {
  if (f.needs_positive() && !(eig.min() > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "function needs a positive spectrum, lambda_min = " + std::to_string(eig.min()));
  }
  return eig.apply(f);
}

Matrix matrix_function(const Matrix& a, MatrixFunction f) {
  return matrix_function(eigh(a), f);
}

Matrix matrix_power(const Matrix& a, double r) {
  if (r == 1.0) return hermitize(a);
  return matrix_function(a, MatrixFunction::power(r));
}
Matrix matrix_log(const Matrix& a) { return matrix_function(a, MatrixFunction::log()); }
Matrix matrix_exp(const Matrix& a) { return matrix_function(a, MatrixFunction::exp()); }
Matrix matrix_sqrt(const Matrix& a) { return matrix_function(a, MatrixFunction::sqrt()); }
Matrix matrix_inverse(const Matrix& a) { return matrix_function(a, MatrixFunction::inverse()); }

LoewnerResult loewner_slack_with_radii(const Matrix& lhs, const Matrix& rhs, double lhs_radius,
                                       double rhs_radius, double tol_rel) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Loewner comparison of different shapes");
  }
  LoewnerResult out;
  out.slack = eigvalsh(hermitize(rhs - lhs))(0);
  out.scale = 1.0 + lhs_radius + rhs_radius;
  out.holds = out.slack >= -tol_rel * out.scale;
  return out;
}

LoewnerResult loewner_slack(const Matrix& lhs, const Matrix& rhs, double tol_rel) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Loewner comparison of different shapes");
  }
  const RealVector l = eigvalsh(lhs);
  const RealVector r = eigvalsh(rhs);
  const double lr = std::max(std::abs(l(0)), std::abs(l(l.size() - 1)));
  const double rr = std::max(std::abs(r(0)), std::abs(r(r.size() - 1)));
  return loewner_slack_with_radii(lhs, rhs, lr, rr, tol_rel);
}

double thompson_distance(const EigenDecomposition& a_eig, const Matrix& b) {
  if (b.rows() != a_eig.eigenvalues.size()) {
    throw Error(ErrorCode::DimensionMismatch, "Thompson distance of different dimensions");
  }
  if (!(a_eig.min() > 0.0)) throw Error(ErrorCode::DomainError, "first argument not PD");
  const Matrix w = a_eig.apply([](double x) { return 1.0 / std::sqrt(x); });
  const RealVector lam = eigvalsh(hermitize(w * b * w));
  if (!(lam(0) > 0.0)) throw Error(ErrorCode::DomainError, "second argument not PD");
  return std::max(std::abs(std::log(lam(0))), std::abs(std::log(lam(lam.size() - 1))));
}

double thompson_distance(const HpdMatrix& a, const HpdMatrix& b) {
  return thompson_distance(eigh(a.matrix()), b.matrix());
}

SpectralBounds spectral_bounds(const HpdMatrix& a) {
  const RealVector lam = eigvalsh(a.matrix());
  return {lam(0), lam(lam.size() - 1)};
}

NormKind NormKind::parse(const std::string& text) {
  if (text == "spectral" || text == "operator") return spectral();
  if (text == "trace" || text == "nuclear") return trace();
  if (text == "frobenius") return frobenius();
  if (text.rfind("kyfan", 0) == 0) {
    std::string digits = text.substr(5);
    if (!digits.empty() && (digits[0] == ':' || digits[0] == '(')) digits = digits.substr(1);
    if (!digits.empty() && digits.back() == ')') digits.pop_back();
    try {
      std::size_t used = 0;
      const int k = std::stoi(digits, &used);
      if (used == digits.size() && k >= 1) return ky_fan(k);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::BadK, "cannot parse Ky Fan order from '" + text + "'");
  }
  throw Error(ErrorCode::BadParameter, "unknown norm '" + text + "'");
}

std::string NormKind::name() const {
  switch (kind_) {
    case Kind::Spectral: return "spectral";
    case Kind::Trace: return "trace";
    case Kind::Frobenius: return "frobenius";
    case Kind::KyFan: return "kyfan:" + std::to_string(k_);
  }
  return "?";
}

RealVector singular_values(const Matrix& a) {
  const auto r = a.rows();
  const auto c = a.cols();
  const auto k = std::min(r, c);
  RealVector sv(k);
  if (k == 0) return sv;
  if (is_hermitian(a)) {
    const RealVector lam = eigvalsh(a);
    for (Eigen::Index i = 0; i < k; ++i) sv(i) = std::abs(lam(i));
  } else {
    Matrix dilation = Matrix::Zero(r + c, r + c);
    dilation.topRightCorner(r, c) = a;
    dilation.bottomLeftCorner(c, r) = a.adjoint();
    const RealVector lam = eigvalsh(dilation);
    for (Eigen::Index i = 0; i < k; ++i) sv(i) = std::max(0.0, lam(lam.size() - 1 - i));
  }
  std::sort(sv.data(), sv.data() + k, std::greater<>());
  return sv;
}

double ui_norm(const Matrix& a, NormKind kind) {
  const RealVector sv = singular_values(a);
  switch (kind.kind()) {
    case NormKind::Kind::Spectral: return sv.size() ? sv(0) : 0.0;
    case NormKind::Kind::Trace: return sv.sum();
    case NormKind::Kind::Frobenius: return sv.norm();
    case NormKind::Kind::KyFan:
      if (kind.k() < 1 || kind.k() > sv.size()) {
        throw Error(ErrorCode::BadK, "Ky Fan k=" + std::to_string(kind.k()) +
                                         " outside [1, " + std::to_string(sv.size()) + "]");
      }
      return sv.head(kind.k()).sum();
  }
  return 0.0;
}

double operator_norm(const Matrix& a) { return ui_norm(a, NormKind::spectral()); }

}  // namespace meanforge
