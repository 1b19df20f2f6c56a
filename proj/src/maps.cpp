#include "meanforge/maps.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace meanforge {

UcpMap::UcpMap(std::vector<Matrix> kraus, std::string label)
    : kraus_(std::move(kraus)), in_dim_(0), out_dim_(0), label_(std::move(label)) {
  if (kraus_.empty()) throw Error(ErrorCode::BadParameter, "map has no Kraus operators");
  in_dim_ = static_cast<int>(kraus_.front().rows());
  out_dim_ = static_cast<int>(kraus_.front().cols());
  if (in_dim_ < 1 || out_dim_ < 1) throw Error(ErrorCode::BadParameter, "empty Kraus operator");
  for (const auto& v : kraus_) {
    if (v.rows() != in_dim_ || v.cols() != out_dim_) {
      throw Error(ErrorCode::DimensionMismatch, "Kraus operators have different shapes");
    }
    if (!v.allFinite()) throw Error(ErrorCode::BadParameter, "non-finite Kraus entry");
  }
}

Matrix UcpMap::apply(const Matrix& a) const {
  if (a.rows() != in_dim_ || a.cols() != in_dim_) {
    throw Error(ErrorCode::DimensionMismatch, "map expects dimension " + std::to_string(in_dim_) +
                                                  ", got " + std::to_string(a.rows()));
  }
  Matrix out = Matrix::Zero(out_dim_, out_dim_);
  for (const auto& v : kraus_) out.noalias() += v.adjoint() * a * v;
  return (out + out.adjoint()) * 0.5;
}

HpdMatrix UcpMap::apply(const HpdMatrix& a) const { return HpdMatrix::trusted(apply(a.matrix())); }

UnitalCheck verify_unital(const UcpMap& phi) {
  Matrix sum = Matrix::Zero(phi.out_dim(), phi.out_dim());
  for (const auto& v : phi.kraus()) sum += v.adjoint() * v;
  const double defect = (sum - Matrix::Identity(phi.out_dim(), phi.out_dim())).norm();
  return {defect, defect <= 1e-10};
}

MatrixTuple map_tuple(const UcpMap& phi, const MatrixTuple& tuple) {
  if (tuple.dim() != phi.in_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "tuple dimension does not match the map");
  }
  std::vector<HpdMatrix> mapped;
  mapped.reserve(tuple.size());
  for (const auto& a : tuple.matrices()) mapped.push_back(phi.apply(a));
  return MatrixTuple(std::move(mapped), tuple.weights(), tuple.bounds());
}

UcpMap identity_map(int n) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "identity map needs n >= 1");
  return UcpMap({Matrix::Identity(n, n)}, "identity");
}

UcpMap unitary_conjugation(const Matrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    throw Error(ErrorCode::BadParameter, "conjugating matrix must be square");
  }
  const auto n = u.rows();
  if ((u.adjoint() * u - Matrix::Identity(n, n)).norm() > 1e-10) {
    throw Error(ErrorCode::BadParameter, "conjugating matrix is not unitary");
  }
  return UcpMap({u}, "unitary_conj");
}

UcpMap pinching(int n, const std::vector<int>& block_sizes) {
  if (block_sizes.empty() || std::accumulate(block_sizes.begin(), block_sizes.end(), 0) != n) {
    throw Error(ErrorCode::BadParameter, "pinching block sizes must sum to n");
  }
  std::vector<Matrix> kraus;
  int offset = 0;
  for (int size : block_sizes) {
    if (size < 1) throw Error(ErrorCode::BadParameter, "pinching blocks must be nonempty");
    Matrix p = Matrix::Zero(n, n);
    p.block(offset, offset, size, size).setIdentity();
    kraus.push_back(std::move(p));
    offset += size;
  }
  return UcpMap(std::move(kraus), "pinching");
}

UcpMap depolarizing(int n) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "depolarizing map needs n >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = scale;
      kraus.push_back(std::move(e));
    }
  }
  return UcpMap(std::move(kraus), "depolarizing");
}

UcpMap compression(const Matrix& v) {
  if (v.cols() < 1 || v.cols() > v.rows()) {
    throw Error(ErrorCode::BadParameter, "isometry must be n x k with 1 <= k <= n");
  }
  if ((v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).norm() > 1e-10) {
    throw Error(ErrorCode::BadParameter, "compression matrix is not an isometry");
  }
  return UcpMap({v}, "compression");
}

UcpMap convex_combination(const std::vector<UcpMap>& maps, const WeightVector& weights) {
  if (maps.empty() || maps.size() != weights.size()) {
    throw Error(ErrorCode::BadParameter, "convex combination needs one weight per map");
  }
  std::vector<Matrix> kraus;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    if (maps[j].in_dim() != maps.front().in_dim() || maps[j].out_dim() != maps.front().out_dim()) {
      throw Error(ErrorCode::BadParameter, "convex combination of maps with different shapes");
    }
    if (weights[j] == 0.0) continue;
    const double s = std::sqrt(weights[j]);
    for (const auto& v : maps[j].kraus()) kraus.push_back(s * v);
  }
  return UcpMap(std::move(kraus), "convex");
}

UcpMap random_map(int in_dim, int out_dim, int k, std::uint64_t seed) {
  if (in_dim < 1 || out_dim < 1 || k < 1) {
    throw Error(ErrorCode::BadParameter, "random map needs positive dimensions and k");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> b(static_cast<std::size_t>(k), Matrix(in_dim, out_dim));
  Matrix gram = Matrix::Zero(out_dim, out_dim);
  for (auto& bj : b) {
    for (int c = 0; c < out_dim; ++c)
      for (int r = 0; r < in_dim; ++r) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        bj(r, c) = Complex(re, im);
      }
    gram += bj.adjoint() * bj;
  }
  const EigenDecomposition gram_eig = eigh(gram);
  if (!(gram_eig.min() > 1e-12 * gram_eig.max())) {
    throw Error(ErrorCode::BadParameter, "random Kraus family is rank deficient; raise k");
  }
  const Matrix whitening = matrix_function(gram_eig, MatrixFunction::power(-0.5));
  for (auto& bj : b) bj = bj * whitening;
  return UcpMap(std::move(b), "random");
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Identity: return "identity";
    case MapKind::UnitaryConj: return "unitary_conj";
    case MapKind::Pinching: return "pinching";
    case MapKind::Depolarizing: return "depolarizing";
    case MapKind::Compression: return "compression";
    case MapKind::Convex: return "convex";
    case MapKind::Random: return "random";
  }
  return "?";
}

MapKind parse_map_kind(const std::string& text) {
  for (MapKind kind : all_map_kinds())
    if (to_string(kind) == text) return kind;
  throw Error(ErrorCode::BadParameter, "unknown map kind '" + text + "'");
}

std::vector<MapKind> all_map_kinds() {
  return {MapKind::Identity,     MapKind::UnitaryConj, MapKind::Pinching, MapKind::Depolarizing,
          MapKind::Compression, MapKind::Convex,      MapKind::Random};
}

}  // namespace meanforge
