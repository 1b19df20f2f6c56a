#pragma once

// Positive unital linear maps in Kraus form: Phi(A) = sum_k V_k^* A V_k with
// V_k of shape in_dim x out_dim and sum_k V_k^* V_k = I_out.

#include <cstdint>
#include <string>
#include <vector>

#include "meanforge/hpd_core.hpp"
#include "meanforge/means.hpp"

namespace meanforge {

class UcpMap {
 public:
  /// Checks shapes only; unitality is reported by verify_unital.
  explicit UcpMap(std::vector<Matrix> kraus, std::string label = "kraus");

  int in_dim() const noexcept { return in_dim_; }
  int out_dim() const noexcept { return out_dim_; }
  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  const std::string& label() const noexcept { return label_; }

  /// Linear action on any in_dim x in_dim matrix.
  Matrix apply(const Matrix& a) const;
  HpdMatrix apply(const HpdMatrix& a) const;

 private:
  std::vector<Matrix> kraus_;
  int in_dim_;
  int out_dim_;
  std::string label_;
};

inline HpdMatrix apply_map(const UcpMap& phi, const HpdMatrix& a) { return phi.apply(a); }

struct UnitalCheck {
  double defect;  // || sum_k V_k^* V_k - I ||_F
  bool ok;        // defect <= 1e-10
};

UnitalCheck verify_unital(const UcpMap& phi);

/// Elementwise Phi(A_i); weights and bounds are carried over.
MatrixTuple map_tuple(const UcpMap& phi, const MatrixTuple& tuple);

UcpMap identity_map(int n);
/// Phi(A) = U^* A U. Throws BadParameter unless U is unitary.
UcpMap unitary_conjugation(const Matrix& u);
/// Keeps the diagonal blocks of the given sizes. Sizes must sum to n.
UcpMap pinching(int n, const std::vector<int>& block_sizes);
/// Phi(A) = (tr A / n) I via the n^2 operators E_ij / sqrt(n).
UcpMap depolarizing(int n);
/// Phi(A) = V^* A V for an isometry V (V^* V = I).
UcpMap compression(const Matrix& v);
/// sum_j a_j Phi_j with a a weight vector; maps must share dimensions.
UcpMap convex_combination(const std::vector<UcpMap>& maps, const WeightVector& weights);
/// k complex Gaussian B_j (in x out) whitened to V_j = B_j (sum_l B_l^* B_l)^{-1/2}.
UcpMap random_map(int in_dim, int out_dim, int k, std::uint64_t seed);

/// Map families exposed to the harness and the CLI.
enum class MapKind { Identity, UnitaryConj, Pinching, Depolarizing, Compression, Convex, Random };

std::string to_string(MapKind kind);
MapKind parse_map_kind(const std::string& text);
std::vector<MapKind> all_map_kinds();

}  // namespace meanforge
