#pragma once

// Random instances with prescribed spectral bounds and the suite driver that
// runs the catalog over a trial grid.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "meanforge/inequalities.hpp"
#include "meanforge/io.hpp"
#include "meanforge/maps.hpp"
#include "meanforge/means.hpp"

namespace meanforge {

inline constexpr const char* kVersion = "0.1.0";

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Haar-distributed unitary: Gram-Schmidt of a complex Gaussian matrix,
/// which leaves R with a positive diagonal.
Matrix gen_haar_unitary(int n, Rng& rng);

/// U diag(lambda) U^* with lambda uniform in [m, M]; `tight` forces the
/// smallest to m and the largest to M. m == M returns exactly m I.
HpdMatrix gen_hpd(int n, double m, double M, bool tight, Rng& rng);

/// A map of the given family acting on n x n matrices.
UcpMap gen_map(MapKind kind, int n, Rng& rng);

struct TrialConfig {
  std::vector<int> dims{2, 3, 5};
  std::vector<int> tuple_sizes{2, 3, 5};
  std::vector<SpectralBounds> bounds{{1.0, 2.0}, {1.0, 10.0}, {0.1, 1.0}};
  int trials = 500;
  std::uint64_t seed = 20260601;
  std::vector<double> t_grid{-1.0, -0.5, 0.1, 0.5, 1.0};
  std::vector<double> p_grid{0.5, 1.0, 2.0, 2.5, 3.0, 4.0};
  std::vector<double> alpha_grid{0.5, 1.0, 2.0, 3.0};
  std::vector<NormKind> norm_kinds{NormKind::spectral(), NormKind::trace(),
                                   NormKind::frobenius(), NormKind::ky_fan(2)};
  std::vector<MapKind> map_kinds{MapKind::Pinching, MapKind::Compression, MapKind::Convex,
                                 MapKind::Random};
  double tol_rel = 1e-8;
  bool tight_mode = true;
  /// Every tenth trial (index = 9 mod 10) sets w_1 = 0 when n >= 2.
  bool zero_weight_corner = true;
  /// Catalog ids to run; empty means all.
  std::vector<std::string> suite;
  SolverOptions solver;

  /// Throws BadParameter or BadBounds.
  void validate() const;
  std::vector<CheckParams> grid() const;
};

struct Instance {
  MatrixTuple tuple;
  UcpMap map;
  int dim;
  SpectralBounds bounds;
};

/// Deterministic in (cfg.seed, trial_index).
Instance gen_instance(const TrialConfig& cfg, int trial_index);

struct FailureRecord {
  std::uint64_t seed;
  int trial;
  Verdict verdict;
};

struct CheckSummary {
  std::string id;
  CheckStatus status = CheckStatus::Theorem;
  long evaluations = 0;
  long passes = 0;
  long failures = 0;
  long skips = 0;
  long solver_failures = 0;
  double min_slack = 0.0;
  double min_relative_slack = 0.0;
  bool has_min = false;
  int argmin_trial = -1;
  CheckParams argmin_params;
  double max_distance = 0.0;  // probes: largest violation magnitude
  std::vector<FailureRecord> failure_list;  // first kMaxFailureRecords
  std::vector<std::pair<std::string, long>> skip_reasons;
};

struct SolverSummary {
  long solves = 0;
  long nonconverged = 0;
  int max_iterations = 0;
  double max_power_certificate = 0.0;
  double max_karcher_residual_per_dim = 0.0;
};

struct SuiteReport {
  TrialConfig config;
  std::vector<CheckSummary> checks;
  SolverSummary solver;
  long trials_run = 0;
  long instance_errors = 0;
  double wall_seconds = 0.0;

  long theorem_failures() const;
  long evaluations() const;
};

inline constexpr std::size_t kMaxFailureRecords = 20;

struct TrialResult {
  int trial;
  std::vector<Verdict> verdicts;
  std::vector<std::pair<std::string, SolveReport>> solves;
  int dim = 0;
  std::string error;  // instance generation failure, if any
};

TrialResult run_trial(const TrialConfig& cfg, int trial_index);

using TrialCallback = std::function<void(const TrialResult&)>;

/// Single-threaded reference.
SuiteReport run_suite_serial(const TrialConfig& cfg, const TrialCallback& on_trial = {});

/// OpenMP over trials; results are folded in trial order, so the report
/// matches run_suite_serial. threads <= 0 uses the OpenMP default.
SuiteReport run_suite(const TrialConfig& cfg, int threads = 0, const TrialCallback& on_trial = {});

Json config_to_json(const TrialConfig& cfg);
/// Timing goes under "timing" and is left out when include_timing is false.
Json report_to_json(const SuiteReport& report, bool include_timing = true);
/// One JSON line per trial.
Json trial_to_json(const TrialConfig& cfg, const TrialResult& trial);

}  // namespace meanforge
