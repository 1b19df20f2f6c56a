#include "meanforge/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <omp.h>

namespace meanforge {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix gen_haar_unitary(int n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "unitary dimension must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(re, im);
    }
  // Modified Gram-Schmidt, two passes for orthogonality at round-off level.
  for (int c = 0; c < n; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < c; ++k) g.col(c) -= g.col(k).dot(g.col(c)) * g.col(k);
    g.col(c) /= g.col(c).norm();
  }
  return g;
}

HpdMatrix gen_hpd(int n, double m, double M, bool tight, Rng& rng) {
  if (!(m > 0.0) || !(m <= M) || !std::isfinite(M)) {
    throw Error(ErrorCode::BadBounds, "need 0 < m <= M");
  }
  if (n < 1) throw Error(ErrorCode::BadParameter, "dimension must be positive");
  if (m == M) return HpdMatrix::scalar(n, m);
  std::uniform_real_distribution<double> uniform(m, M);
  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (double& x : lambda) x = uniform(rng);
  std::sort(lambda.begin(), lambda.end());
  if (tight) {
    lambda.front() = m;
    lambda.back() = M;
  }
  const Matrix u = gen_haar_unitary(n, rng);
  RealVector diag(n);
  for (int i = 0; i < n; ++i) diag(i) = lambda[static_cast<std::size_t>(i)];
  return HpdMatrix::trusted(u * diag.asDiagonal() * u.adjoint());
}

namespace {

std::vector<double> exponential_weights(int n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = expo(rng);
  return w;
}

/// Normalizes so the entries sum to one exactly in floating point order.
WeightVector normalized(std::vector<double> w) {
  double total = 0.0;
  for (double x : w) total += x;
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    w[i] /= total;
    head += w[i];
  }
  w.back() = std::max(0.0, 1.0 - head);
  return WeightVector(std::move(w));
}

UcpMap random_pinching(int n, Rng& rng) {
  if (n == 1) return pinching(1, {1});
  std::uniform_int_distribution<int> split(1, n - 1);
  const int s = split(rng);
  return pinching(n, {s, n - s});
}

}  // namespace

UcpMap gen_map(MapKind kind, int n, Rng& rng) {
  switch (kind) {
    case MapKind::Identity: return identity_map(n);
    case MapKind::UnitaryConj: return unitary_conjugation(gen_haar_unitary(n, rng));
    case MapKind::Pinching: return random_pinching(n, rng);
    case MapKind::Depolarizing: return depolarizing(n);
    case MapKind::Compression: {
      const int k = std::max(1, n - 1);
      return compression(gen_haar_unitary(n, rng).leftCols(k));
    }
    case MapKind::Convex: {
      std::vector<UcpMap> parts{unitary_conjugation(gen_haar_unitary(n, rng)),
                                random_pinching(n, rng), depolarizing(n)};
      return convex_combination(parts, normalized(exponential_weights(3, rng)));
    }
    case MapKind::Random: return random_map(n, n, 3, rng());
  }
  throw Error(ErrorCode::BadParameter, "unknown map kind");
}

void TrialConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::BadParameter, "trials must be at least 1");
  if (dims.empty() || tuple_sizes.empty() || bounds.empty() || map_kinds.empty()) {
    throw Error(ErrorCode::BadParameter, "dims, tuple sizes, bounds and maps must be nonempty");
  }
  for (int d : dims)
    if (d < 1 || d > 64) throw Error(ErrorCode::BadParameter, "dimension out of range");
  for (int n : tuple_sizes)
    if (n < 1) throw Error(ErrorCode::BadParameter, "tuple size must be positive");
  for (const auto& b : bounds)
    if (!(b.m > 0.0) || !(b.m <= b.M) || !std::isfinite(b.M)) {
      throw Error(ErrorCode::BadBounds, "need 0 < m <= M");
    }
  if (t_grid.empty() || p_grid.empty() || alpha_grid.empty() || norm_kinds.empty()) {
    throw Error(ErrorCode::BadParameter, "parameter grids must be nonempty");
  }
  for (double t : t_grid)
    if (!(t != 0.0 && std::abs(t) <= 1.0)) throw Error(ErrorCode::BadT, "t must lie in [-1, 1] \\ {0}");
  for (double p : p_grid)
    if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::ParamOutOfDomain, "p must be positive");
  for (double a : alpha_grid)
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::ParamOutOfDomain, "alpha must be positive");
  if (!(tol_rel >= 0.0)) throw Error(ErrorCode::BadParameter, "tolerance must be nonnegative");
  for (const auto& id : suite) find_check(id);
}

std::vector<CheckParams> TrialConfig::grid() const {
  std::vector<CheckParams> out;
  for (double t : t_grid)
    for (double p : p_grid)
      for (double a : alpha_grid)
        for (const NormKind& norm : norm_kinds) out.push_back({t, p, a, norm});
  return out;
}

Instance gen_instance(const TrialConfig& cfg, int trial_index) {
  Rng rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(trial_index))));
  const std::size_t cells = cfg.dims.size() * cfg.tuple_sizes.size() * cfg.bounds.size();
  const std::size_t cell = static_cast<std::size_t>(trial_index) % cells;
  const int dim = cfg.dims[cell % cfg.dims.size()];
  const int n = cfg.tuple_sizes[(cell / cfg.dims.size()) % cfg.tuple_sizes.size()];
  const SpectralBounds b = cfg.bounds[cell / (cfg.dims.size() * cfg.tuple_sizes.size())];
  const MapKind kind = cfg.map_kinds[static_cast<std::size_t>(trial_index) % cfg.map_kinds.size()];

  std::vector<double> raw = exponential_weights(n, rng);
  if (cfg.zero_weight_corner && n >= 2 && trial_index % 10 == 9) raw[0] = 0.0;
  WeightVector weights = normalized(std::move(raw));

  std::vector<HpdMatrix> matrices;
  matrices.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (dim == 1 && cfg.tight_mode && b.m < b.M && i < 2) {
      matrices.push_back(HpdMatrix::scalar(1, i == 0 ? b.m : b.M));
    } else {
      matrices.push_back(gen_hpd(dim, b.m, b.M, cfg.tight_mode, rng));
    }
  }
  UcpMap map = gen_map(kind, dim, rng);
  return Instance{MatrixTuple(std::move(matrices), std::move(weights), b), std::move(map), dim, b};
}

long SuiteReport::theorem_failures() const {
  long total = 0;
  for (const auto& c : checks)
    if (c.status == CheckStatus::Theorem) total += c.failures;
  return total;
}

long SuiteReport::evaluations() const {
  long total = 0;
  for (const auto& c : checks) total += c.evaluations;
  return total;
}

TrialResult run_trial(const TrialConfig& cfg, int trial_index) {
  TrialResult result;
  result.trial = trial_index;
  try {
    Instance inst = gen_instance(cfg, trial_index);
    result.dim = inst.dim;
    InstanceContext ctx(std::move(inst.tuple), std::move(inst.map), cfg.solver, cfg.tol_rel);
    RunOptions options;
    options.tol_rel = cfg.tol_rel;
    options.solver = cfg.solver;
    options.ids = cfg.suite;
    result.verdicts = run_catalog(ctx, cfg.grid(), options);
    result.solves = ctx.reports();
  } catch (const Error& e) {
    result.error = e.what();
  }
  return result;
}

namespace {

class Aggregator {
 public:
  explicit Aggregator(const TrialConfig& cfg) {
    report_.config = cfg;
    for (const auto& check : catalog()) {
      if (!cfg.suite.empty() &&
          std::find(cfg.suite.begin(), cfg.suite.end(), check.id) == cfg.suite.end()) {
        continue;
      }
      index_[check.id] = report_.checks.size();
      CheckSummary s;
      s.id = check.id;
      s.status = check.status;
      report_.checks.push_back(std::move(s));
      skips_.emplace_back();
    }
  }

  void add(const TrialResult& trial) {
    ++report_.trials_run;
    if (!trial.error.empty()) ++report_.instance_errors;
    for (const auto& [label, r] : trial.solves) {
      SolverSummary& s = report_.solver;
      ++s.solves;
      if (!r.converged) ++s.nonconverged;
      s.max_iterations = std::max(s.max_iterations, r.iterations);
      if (label.rfind("Lambda", 0) == 0) {
        s.max_karcher_residual_per_dim =
            std::max(s.max_karcher_residual_per_dim, r.residual / trial.dim);
      } else {
        s.max_power_certificate = std::max(s.max_power_certificate, r.residual);
      }
    }
    for (const Verdict& v : trial.verdicts) {
      const std::size_t k = index_.at(v.check_id);
      CheckSummary& s = report_.checks[k];
      ++s.evaluations;
      if (v.outcome == Outcome::Skip) {
        ++s.skips;
        if (v.solver_failure) {
          ++s.solver_failures;
          ++report_.solver.nonconverged;
        }
        const std::string prefix = "skipped: ";
        ++skips_[k][v.notes.rfind(prefix, 0) == 0 ? v.notes.substr(prefix.size()) : v.notes];
        continue;
      }
      if (v.outcome == Outcome::Pass) ++s.passes;
      else ++s.failures;
      if (!s.has_min || v.relative_slack < s.min_relative_slack) {
        s.has_min = true;
        s.min_relative_slack = v.relative_slack;
        s.min_slack = v.slack;
        s.argmin_trial = trial.trial;
        s.argmin_params = v.params_used;
      }
      s.max_distance = std::max(s.max_distance, -v.slack);
      if (v.outcome == Outcome::Fail && s.failure_list.size() < kMaxFailureRecords) {
        s.failure_list.push_back({report_.config.seed, trial.trial, v});
      }
    }
  }

  SuiteReport finish(double seconds) {
    for (std::size_t k = 0; k < report_.checks.size(); ++k) {
      report_.checks[k].skip_reasons.assign(skips_[k].begin(), skips_[k].end());
    }
    report_.wall_seconds = seconds;
    return std::move(report_);
  }

 private:
  SuiteReport report_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::map<std::string, long>> skips_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SuiteReport run_suite_serial(const TrialConfig& cfg, const TrialCallback& on_trial) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Aggregator agg(cfg);
  for (int i = 0; i < cfg.trials; ++i) {
    const TrialResult r = run_trial(cfg, i);
    if (on_trial) on_trial(r);
    agg.add(r);
  }
  return agg.finish(seconds_since(start));
}

SuiteReport run_suite(const TrialConfig& cfg, int threads, const TrialCallback& on_trial) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Aggregator agg(cfg);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for ordered schedule(dynamic, 1) num_threads(nthreads)
  for (int i = 0; i < cfg.trials; ++i) {
    const TrialResult r = run_trial(cfg, i);
#pragma omp ordered
    {
      if (on_trial) on_trial(r);
      agg.add(r);
    }
  }
  return agg.finish(seconds_since(start));
}

Json config_to_json(const TrialConfig& cfg) {
  Json j;
  j["dims"] = cfg.dims;
  j["tuple_sizes"] = cfg.tuple_sizes;
  Json bounds = Json::array();
  for (const auto& b : cfg.bounds) bounds.push_back({b.m, b.M});
  j["bounds"] = std::move(bounds);
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["t_grid"] = cfg.t_grid;
  j["p_grid"] = cfg.p_grid;
  j["alpha_grid"] = cfg.alpha_grid;
  Json norms = Json::array();
  for (const auto& n : cfg.norm_kinds) norms.push_back(n.name());
  j["norm_kinds"] = std::move(norms);
  Json maps = Json::array();
  for (MapKind k : cfg.map_kinds) maps.push_back(to_string(k));
  j["map_kinds"] = std::move(maps);
  j["tol_rel"] = cfg.tol_rel;
  j["tight_mode"] = cfg.tight_mode;
  j["zero_weight_corner"] = cfg.zero_weight_corner;
  j["suite"] = cfg.suite;
  return j;
}

namespace {

Json fingerprint(std::uint64_t seed, int trial, const CheckParams& params, unsigned uses) {
  Json j{{"seed", seed}, {"trial", trial}};
  const Json p = params_to_json(params, uses);
  for (const auto& [key, value] : p.items()) j[key] = value;
  return j;
}

}  // namespace

Json report_to_json(const SuiteReport& report, bool include_timing) {
  Json j;
  j["version"] = kVersion;
  j["config"] = config_to_json(report.config);
  Json checks = Json::object();
  for (const auto& s : report.checks) {
    const unsigned uses = find_check(s.id).uses;
    Json c;
    c["status"] = to_string(s.status);
    c["evaluations"] = s.evaluations;
    c["passes"] = s.passes;
    c["failures"] = s.failures;
    c["skips"] = s.skips;
    c["solver_failures"] = s.solver_failures;
    c["min_slack"] = s.has_min ? Json(s.min_slack) : Json(nullptr);
    c["min_relative_slack"] = s.has_min ? Json(s.min_relative_slack) : Json(nullptr);
    c["argmin"] = s.has_min ? fingerprint(report.config.seed, s.argmin_trial, s.argmin_params, uses)
                            : Json(nullptr);
    if (s.status == CheckStatus::Probe) c["max_distance"] = s.max_distance;
    Json failures = Json::array();
    for (const auto& f : s.failure_list) {
      Json item = fingerprint(f.seed, f.trial, f.verdict.params_used, uses);
      item["slack"] = f.verdict.slack;
      item["relative_slack"] = f.verdict.relative_slack;
      item["notes"] = f.verdict.notes;
      failures.push_back(std::move(item));
    }
    c["failure_list"] = std::move(failures);
    Json skips = Json::object();
    for (const auto& [reason, count] : s.skip_reasons) skips[reason] = count;
    c["skip_reasons"] = std::move(skips);
    checks[s.id] = std::move(c);
  }
  j["checks"] = std::move(checks);
  j["solver"] = {{"solves", report.solver.solves},
                 {"nonconverged", report.solver.nonconverged},
                 {"max_iterations", report.solver.max_iterations},
                 {"max_power_certificate", report.solver.max_power_certificate},
                 {"max_karcher_residual_per_dim", report.solver.max_karcher_residual_per_dim}};
  j["totals"] = {{"trials", report.trials_run},
                 {"evaluations", report.evaluations()},
                 {"theorem_failures", report.theorem_failures()},
                 {"instance_errors", report.instance_errors}};
  if (include_timing) j["timing"] = {{"wall_seconds", report.wall_seconds}};
  return j;
}

Json trial_to_json(const TrialConfig& cfg, const TrialResult& trial) {
  long pass = 0, fail = 0, skip = 0;
  Json failures = Json::array();
  for (const Verdict& v : trial.verdicts) {
    if (v.outcome == Outcome::Pass) ++pass;
    else if (v.outcome == Outcome::Skip) ++skip;
    else {
      ++fail;
      failures.push_back(verdict_to_json(v));
    }
  }
  Json j{{"seed", cfg.seed}, {"trial", trial.trial}, {"dim", trial.dim},
         {"passes", pass},   {"failures", fail},     {"skips", skip}};
  if (!trial.error.empty()) j["error"] = trial.error;
  j["failed"] = std::move(failures);
  return j;
}

}  // namespace meanforge
