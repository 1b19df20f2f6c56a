#pragma once

// The inequality corpus as data: each catalog entry builds its left- and
// right-hand sides from the means and maps of one instance and reports a
// Loewner (or scalar) slack.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meanforge/hpd_core.hpp"
#include "meanforge/maps.hpp"
#include "meanforge/means.hpp"

namespace meanforge {

/// Multiplicative constants, all functions of the spectral bounds m <= M.
class Constants {
 public:
  Constants(double m, double M);

  double m() const noexcept { return m_; }
  double M() const noexcept { return M_; }

  /// (M+m)^2 / (4mM).
  double K() const;
  /// max{K, (M+m)^2 / (4^{2/p} Mm)}.
  double alpha_thm(double p) const;
  /// max{K, (M+m)^2 / (4^{1/p} mM)}.
  double alpha_anticomm(double p) const;
  /// (M+m)^2 / (4^{2/p} mM); the checks use its p-th power.
  double c4(double p) const;
  /// (K (M^2+m^2))^{2p} / (16 M^{2p} m^{2p}).
  double c23(double p) const;
  /// ((M+m) / (2 sqrt(Mm)))^p.
  double c31(double p) const;

 private:
  double m_;
  double M_;
};

struct CheckParams {
  double t = 0.5;
  double p = 2.0;
  double alpha_lemma = 1.0;
  NormKind norm = NormKind::spectral();

  friend bool operator==(const CheckParams&, const CheckParams&) = default;
};

enum class CheckStatus { Theorem, Probe };

enum ParamUse : unsigned {
  kUsesNone = 0,
  kUsesT = 1u << 0,
  kUsesP = 1u << 1,
  kUsesAlpha = 1u << 2,
  kUsesNorm = 1u << 3,
};

enum class Outcome { Pass, Fail, Skip };

std::string to_string(Outcome outcome);
std::string to_string(CheckStatus status);

struct Extremes {
  double min = 0.0;
  double max = 0.0;
};

struct Verdict {
  std::string check_id;
  CheckStatus status = CheckStatus::Theorem;
  Outcome outcome = Outcome::Skip;
  bool holds = false;
  double slack = 0.0;
  double relative_slack = 0.0;
  double constant_value = 0.0;
  CheckParams params_used;
  unsigned uses = kUsesNone;
  Extremes lhs_extremes;
  Extremes rhs_extremes;
  std::string notes;
  bool solver_failure = false;
};

class InstanceContext;

/// One comparison inside a check.
struct Term {
  std::string label;
  double slack = 0.0;
  double scale = 1.0;
  bool holds = false;
  Extremes lhs;
  Extremes rhs;

  double relative_slack() const { return slack / scale; }
};

struct Evaluation {
  std::vector<Term> terms;
  double constant = 1.0;
  std::string notes;
};

struct CheckDefinition {
  std::string id;
  CheckStatus status;
  unsigned uses;
  std::string statement;
  /// Reason the parameters fall outside the hypotheses, if they do.
  std::function<std::optional<std::string>(const CheckParams&)> param_domain;
  /// Same for the instance (tuple size, map shape); may be empty.
  std::function<std::optional<std::string>(const InstanceContext&)> instance_domain;
  /// The multiplier the statement carries.
  std::function<double(const Constants&, const CheckParams&)> constant;
  std::function<Evaluation(InstanceContext&, const CheckParams&)> evaluate;
};

/// The full catalog in a fixed order.
const std::vector<CheckDefinition>& catalog();
const CheckDefinition& find_check(const std::string& id);
std::vector<std::string> theorem_check_ids();

/// Multiplier used by check `id` (or a named constant: K, alpha_thm,
/// alpha_anticomm, c4, c23, c31) at bounds (m, M) and exponent p.
/// Throws ParamOutOfDomain or UnknownCheck.
double constant_of(const std::string& id, double m, double M, double p);

/// A Hermitian matrix with its eigendecomposition.
struct SpectralMatrix {
  HpdMatrix matrix;
  EigenDecomposition eig;

  explicit SpectralMatrix(HpdMatrix m);
  double min() const { return eig.min(); }
  double max() const { return eig.max(); }
  Matrix power(double p) const;
};

/// Lazily computed means and mapped quantities of one (tuple, map) instance.
class InstanceContext {
 public:
  InstanceContext(MatrixTuple tuple, UcpMap map, SolverOptions options = {}, double tol_rel = 1e-8);

  const MatrixTuple& tuple() const noexcept { return tuple_; }
  const UcpMap& map() const noexcept { return map_; }
  const Constants& constants() const noexcept { return constants_; }
  double tol() const noexcept { return tol_; }
  const SolverOptions& solver_options() const noexcept { return options_; }

  const MatrixTuple& mapped_tuple();
  const SpectralMatrix& arithmetic();
  const SpectralMatrix& harmonic();
  const SpectralMatrix& mapped_arithmetic();           // Phi(sum w_i A_i)
  const SpectralMatrix& power_mean(double t);          // P_t(w; A)
  const SpectralMatrix& mapped_power_mean(double t);   // P_t(w; Phi(A))
  const SpectralMatrix& phi_of_power_mean(double t);   // Phi(P_t(w; A))
  const SpectralMatrix& karcher();                     // Lambda(w; A)
  const SpectralMatrix& mapped_karcher();              // Lambda(w; Phi(A))
  const SpectralMatrix& phi_of_karcher();              // Phi(Lambda(w; A))

  /// Every solver report produced so far, labelled.
  const std::vector<std::pair<std::string, SolveReport>>& reports() const noexcept {
    return reports_;
  }

 private:
  MatrixTuple tuple_;
  UcpMap map_;
  SolverOptions options_;
  double tol_;
  Constants constants_;
  std::optional<MatrixTuple> mapped_;
  std::optional<SpectralMatrix> arith_, harm_, mapped_arith_, karcher_, mapped_karcher_,
      phi_karcher_;
  std::map<double, SpectralMatrix> power_, mapped_power_, phi_power_;
  std::vector<std::pair<std::string, SolveReport>> reports_;
};

struct RunOptions {
  double tol_rel = 1e-8;
  SolverOptions solver;
  std::vector<std::string> ids;  // empty means the whole catalog
};

/// Evaluates one check. Throws UnknownCheck, ParamOutOfDomain, or
/// propagates NoConvergence.
Verdict evaluate_check(const std::string& id, const MatrixTuple& tuple, const UcpMap& map,
                       const CheckParams& params, const RunOptions& options = {});
Verdict evaluate_check(const CheckDefinition& check, InstanceContext& ctx,
                       const CheckParams& params);

/// One verdict per (catalog entry x distinct admissible grid point), grid
/// points projected onto the parameters each entry uses. Out-of-domain
/// points become skips with the reason in the notes; per-check errors too.
std::vector<Verdict> run_catalog(InstanceContext& ctx, const std::vector<CheckParams>& grid,
                                 const RunOptions& options = {});
std::vector<Verdict> run_catalog(const MatrixTuple& tuple, const UcpMap& map,
                                 const std::vector<CheckParams>& grid,
                                 const RunOptions& options = {});

}  // namespace meanforge
