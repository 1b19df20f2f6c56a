#include "meanforge/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "meanforge/harness.hpp"

namespace meanforge {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// --tol, then MEANFORGE_TOL, then the default.
double resolve_tol(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MEANFORGE_TOL"); env && *env) {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(value >= 0.0)) {
      throw Error(ErrorCode::BadParameter, std::string("MEANFORGE_TOL is not a tolerance: ") + env);
    }
    return value;
  }
  return 1e-8;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") out << j.dump(2) << '\n';
  else write_json_file(path, j);
}

struct MeanArgs {
  std::string kind;
  std::string matrices;
  std::string weights;
  double t = 0.5;
  std::string out;
};

int run_mean(const MeanArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<HpdMatrix> matrices = matrices_from_json(read_json_file(a.matrices));
  WeightVector weights = a.weights.empty() ? WeightVector::uniform(matrices.size())
                                           : weights_from_json(read_json_file(a.weights));
  if (weights.size() != matrices.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one weight per matrix required");
  }
  const MatrixTuple tuple(std::move(matrices), std::move(weights));
  Matrix result;
  if (a.kind == "arith") {
    result = arithmetic_mean(tuple).matrix();
  } else if (a.kind == "harm") {
    result = harmonic_mean(tuple).matrix();
  } else if (a.kind == "power") {
    const MeanResult r = power_mean(tuple, a.t);
    err << "power mean: " << r.report.iterations << " iterations, certificate "
        << fmt(r.report.residual) << '\n';
    result = r.mean.matrix();
  } else {
    const MeanResult r = karcher_mean(tuple);
    err << "karcher mean: " << r.report.iterations << " iterations, residual "
        << fmt(r.report.residual) << '\n';
    result = r.mean.matrix();
  }
  emit(matrix_to_json(result), a.out, out);
  return kExitOk;
}

struct VerifyArgs {
  std::string suite = "all";
  std::vector<int> dims;
  std::vector<int> sizes;
  std::optional<double> m;
  std::optional<double> M;
  int trials = 500;
  std::uint64_t seed = TrialConfig{}.seed;
  std::vector<double> t;
  std::vector<double> p;
  std::vector<double> alpha;
  std::vector<std::string> norms;
  std::vector<std::string> maps;
  std::optional<double> tol;
  bool tight = true;
  bool corner = true;
  std::string out;
  std::string jsonl;
  int threads = 0;
  bool serial = false;
};

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> ids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) ids.push_back(item);
  return ids;
}

TrialConfig config_from(const VerifyArgs& a) {
  TrialConfig cfg;
  if (a.suite != "all") cfg.suite = split_ids(a.suite);
  if (!a.dims.empty()) cfg.dims = a.dims;
  if (!a.sizes.empty()) cfg.tuple_sizes = a.sizes;
  if (a.m.has_value() != a.M.has_value()) {
    throw Error(ErrorCode::BadBounds, "--m and --M must be given together");
  }
  if (a.m) cfg.bounds = {{*a.m, *a.M}};
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  if (!a.t.empty()) cfg.t_grid = a.t;
  if (!a.p.empty()) cfg.p_grid = a.p;
  if (!a.alpha.empty()) cfg.alpha_grid = a.alpha;
  if (!a.norms.empty()) {
    cfg.norm_kinds.clear();
    for (const auto& n : a.norms) cfg.norm_kinds.push_back(NormKind::parse(n));
  }
  if (!a.maps.empty()) {
    cfg.map_kinds.clear();
    for (const auto& k : a.maps) cfg.map_kinds.push_back(parse_map_kind(k));
  }
  cfg.tol_rel = resolve_tol(a.tol);
  cfg.tight_mode = a.tight;
  cfg.zero_weight_corner = a.corner;
  cfg.validate();
  return cfg;
}

void print_summary(const SuiteReport& report, std::ostream& out) {
  char line[200];
  std::snprintf(line, sizeof line, "%-26s %-7s %7s %7s %7s %7s  %s\n", "check", "status", "evals",
                "pass", "fail", "skip", "min_rel_slack");
  out << line;
  for (const auto& c : report.checks) {
    const std::string slack = c.has_min ? fmt(c.min_relative_slack) : "-";
    std::snprintf(line, sizeof line, "%-26s %-7s %7ld %7ld %7ld %7ld  %s\n", c.id.c_str(),
                  to_string(c.status).c_str(), c.evaluations, c.passes, c.failures, c.skips,
                  slack.c_str());
    out << line;
  }
  out << "trials: " << report.trials_run << ", theorem failures: " << report.theorem_failures()
      << ", solver failures: " << report.solver.nonconverged
      << ", wall time: " << fmt(report.wall_seconds) << " s\n";
}

int exit_code_of(const SuiteReport& report) {
  if (report.theorem_failures() > 0) return kExitTheoremFailed;
  if (report.solver.nonconverged > 0) return kExitNoConvergence;
  return kExitOk;
}

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const TrialConfig cfg = config_from(a);
  std::ofstream lines;
  TrialCallback on_trial;
  if (!a.jsonl.empty()) {
    lines.open(a.jsonl);
    if (!lines) throw Error(ErrorCode::Io, "cannot write " + a.jsonl);
    on_trial = [&](const TrialResult& r) { lines << trial_to_json(cfg, r).dump() << '\n' << std::flush; };
  }
  const SuiteReport report = a.serial ? run_suite_serial(cfg, on_trial)
                                      : run_suite(cfg, a.threads, on_trial);
  if (!a.out.empty()) write_json_file(a.out, report_to_json(report));
  print_summary(report, out);
  if (report.instance_errors > 0) {
    err << report.instance_errors << " trial(s) could not generate an instance\n";
  }
  return exit_code_of(report);
}

struct LedgerArgs {
  int trials = 60;
  std::uint64_t seed = TrialConfig{}.seed;
  std::optional<double> tol;
  std::string out;
};

Json probe_line(const Verdict& v) { return verdict_to_json(v); }

int run_ledger(const LedgerArgs& a, std::ostream& out) {
  const double tol = resolve_tol(a.tol);
  RunOptions options;
  options.tol_rel = tol;
  Json doc;
  bool theorem_failed = false;

  // Scalar pair (1, 9): the power mean with weights (1-a, a) against A #_a B.
  {
    const MatrixTuple tuple({HpdMatrix::scalar(1, 1.0), HpdMatrix::scalar(1, 9.0)},
                            WeightVector({0.5, 0.5}));
    const UcpMap phi = identity_map(1);
    Json rows = Json::array();
    out << "ledger_fact_p30 on scalars (1, 9), weights (0.5, 0.5):\n";
    for (double t : {0.5, 1.0}) {
      const double pt = power_mean(tuple, t).mean.matrix()(0, 0).real();
      const double geo = geometric_mean(tuple[0], tuple[1]).matrix()(0, 0).real();
      CheckParams params;
      params.t = t;
      const Verdict v = evaluate_check("ledger_fact_p30", tuple, phi, params, options);
      out << "  t=" << fmt(t) << ": P_t=" << fmt(pt) << " vs A#B=" << fmt(geo)
          << ", Thompson distance " << fmt(-v.slack) << " (" << to_string(v.outcome) << ")\n";
      rows.push_back(probe_line(v));
    }
    for (double p : {2.0, 4.0}) {
      CheckParams params;
      params.p = p;
      const Verdict v = evaluate_check("geo_reverse_p", tuple, phi, params, options);
      theorem_failed = theorem_failed || !v.holds;
      out << "  geo_reverse_p at p=" << fmt(p) << " on the same pair: " << to_string(v.outcome)
          << " (relative slack " << fmt(v.relative_slack) << ")\n";
      rows.push_back(probe_line(v));
    }
    doc["scalar_pair"] = std::move(rows);
  }

  // Anticommutator bound with the unmapped mean on the left.
  {
    Matrix a_diag = Matrix::Zero(2, 2);
    a_diag(0, 0) = 2.0;
    a_diag(1, 1) = 1.0;
    const MatrixTuple tuple({HpdMatrix::checked(a_diag)}, WeightVector({1.0}),
                            SpectralBounds{1.0, 2.0});
    const UcpMap phi = depolarizing(2);
    CheckParams params;
    params.t = 1.0;
    params.p = 1.0;
    const Verdict printed = evaluate_check("anticomm_printed", tuple, phi, params, options);
    const Verdict mapped = evaluate_check("anticomm_power", tuple, phi, params, options);
    theorem_failed = theorem_failed || !mapped.holds;
    out << "anticommutator with A = diag(2, 1), depolarizing map, m=1, M=2, p=1:\n"
        << "  unmapped mean: lambda_max = " << fmt(printed.lhs_extremes.max) << " vs bound "
        << fmt(printed.constant_value) << " (" << to_string(printed.outcome) << ")\n"
        << "  mapped mean:   relative slack " << fmt(mapped.relative_slack) << " ("
        << to_string(mapped.outcome) << ")\n";
    doc["anticommutator"] = {probe_line(printed), probe_line(mapped)};
  }

  // Norm inequality (ii) below exponent one.
  {
    const HpdMatrix id = HpdMatrix::identity(2);
    const double alpha = 0.5;
    const double lhs = operator_norm(matrix_power(id, alpha) + matrix_power(id, alpha));
    const double rhs = operator_norm(matrix_power(2.0 * id.matrix(), alpha));
    out << "norm inequality ||A^a + B^a|| <= ||(A + B)^a|| at A = B = I, a = 0.5: " << fmt(lhs)
        << " vs " << fmt(rhs) << (lhs <= rhs ? " (holds)\n" : " (fails; evaluated only for a >= 1)\n");
    doc["lemma6_ii_small_alpha"] = {{"alpha", alpha}, {"lhs", lhs}, {"rhs", rhs}};
  }

  // Probes over random instances.
  {
    TrialConfig cfg;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.tol_rel = tol;
    cfg.suite = {"ledger_fact_p30", "geo_reverse_p", "anticomm_printed",
                 "anticomm_karcher_printed"};
    const SuiteReport report = run_suite(cfg);
    out << "random instances (" << report.trials_run << " trials):\n";
    for (const auto& c : report.checks) {
      out << "  " << c.id << " [" << to_string(c.status) << "]: " << c.failures << " of "
          << (c.passes + c.failures) << " violated";
      if (c.status == CheckStatus::Probe) out << ", max distance " << fmt(c.max_distance);
      out << '\n';
    }
    theorem_failed = theorem_failed || report.theorem_failures() > 0;
    doc["random"] = report_to_json(report, false);
  }

  if (!a.out.empty()) write_json_file(a.out, doc);
  return theorem_failed ? kExitTheoremFailed : kExitOk;
}

struct GenArgs {
  int dim = 3;
  int n = 3;
  double m = 1.0;
  double M = 10.0;
  std::uint64_t seed = TrialConfig{}.seed;
  int trial = 0;
  std::string map = "random";
  bool tight = true;
  std::string out = ".";
};

int run_gen(const GenArgs& a, std::ostream& out) {
  TrialConfig cfg;
  cfg.dims = {a.dim};
  cfg.tuple_sizes = {a.n};
  cfg.bounds = {{a.m, a.M}};
  cfg.seed = a.seed;
  cfg.map_kinds = {parse_map_kind(a.map)};
  cfg.tight_mode = a.tight;
  cfg.zero_weight_corner = false;
  cfg.trials = a.trial + 1;
  cfg.validate();
  const Instance inst = gen_instance(cfg, a.trial);
  const std::filesystem::path dir(a.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + a.out);
  write_json_file((dir / "matrices.json").string(), matrices_to_json(inst.tuple.matrices()));
  write_json_file((dir / "weights.json").string(), weights_to_json(inst.tuple.weights()));
  write_json_file((dir / "map.json").string(), map_to_json(inst.map));
  out << (dir / "matrices.json").string() << '\n'
      << (dir / "weights.json").string() << '\n'
      << (dir / "map.json").string() << '\n';
  return kExitOk;
}

struct ConstantsArgs {
  double m = 1.0;
  double M = 2.0;
  double p = 2.0;
};

int run_constants(const ConstantsArgs& a, std::ostream& out) {
  if (!(a.p > 0.0)) throw Error(ErrorCode::ParamOutOfDomain, "p must be positive");
  const Constants c(a.m, a.M);
  out << "K=" << fmt(c.K()) << '\n'
      << "alpha_thm=" << fmt(c.alpha_thm(a.p)) << '\n'
      << "alpha_anticomm=" << fmt(c.alpha_anticomm(a.p)) << '\n'
      << "c4=" << fmt(c.c4(a.p)) << '\n'
      << "c4^p=" << fmt(std::pow(c.c4(a.p), a.p)) << '\n'
      << "c23=" << fmt(c.c23(a.p)) << '\n'
      << "c31=" << fmt(c.c31(a.p)) << '\n';
  return kExitOk;
}

int exit_for(const Error& e) {
  return e.code() == ErrorCode::NoConvergence ? kExitNoConvergence : kExitUsage;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix power means, Karcher means and operator inequality checks", "meanforge"};
  app.require_subcommand(1);

  MeanArgs mean_args;
  auto* mean = app.add_subcommand("mean", "Compute a weighted mean of HPD matrices");
  mean->add_option("kind", mean_args.kind, "power | karcher | arith | harm")
      ->required()
      ->check(CLI::IsMember({"power", "karcher", "arith", "harm"}));
  mean->add_option("--matrices", mean_args.matrices, "Matrix list JSON")->required();
  mean->add_option("--weights", mean_args.weights, "Weights JSON (default uniform)");
  mean->add_option("--t", mean_args.t, "Power mean exponent in [-1, 1] \\ {0}");
  mean->add_option("--out", mean_args.out, "Output file (default stdout)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run catalog checks over random instances");
  verify->add_option("--suite", verify_args.suite, "all, or comma-separated check ids");
  verify->add_option("--dim", verify_args.dims, "Matrix dimensions")->delimiter(',');
  verify->add_option("--n", verify_args.sizes, "Tuple sizes")->delimiter(',');
  verify->add_option("--m", verify_args.m, "Lower spectral bound");
  verify->add_option("--M", verify_args.M, "Upper spectral bound");
  verify->add_option("--trials", verify_args.trials, "Number of trials");
  verify->add_option("--seed", verify_args.seed, "Base seed");
  verify->add_option("--t", verify_args.t, "t grid")->delimiter(',');
  verify->add_option("--p", verify_args.p, "p grid")->delimiter(',');
  verify->add_option("--alpha", verify_args.alpha, "Scalar alpha grid for the norm lemma")
      ->delimiter(',');
  verify->add_option("--norm", verify_args.norms, "spectral, trace, frobenius, kyfan:K")
      ->delimiter(',');
  verify->add_option("--maps", verify_args.maps, "Map families")->delimiter(',');
  verify->add_option("--tol", verify_args.tol, "Relative Loewner tolerance");
  verify->add_flag("--tight,!--no-tight", verify_args.tight,
                   "Force each matrix to attain m and M (default on)");
  verify->add_flag("!--no-corner", verify_args.corner, "Disable the zero-weight corner trials");
  verify->add_option("--out", verify_args.out, "Aggregate JSON report");
  verify->add_option("--jsonl", verify_args.jsonl, "Per-trial JSON lines");
  verify->add_option("--threads", verify_args.threads, "OpenMP threads (0 = default)");
  verify->add_flag("--serial", verify_args.serial, "Use the single-threaded reference driver");

  LedgerArgs ledger_args;
  auto* ledger = app.add_subcommand("ledger", "Run the falsification probes");
  ledger->add_option("--trials", ledger_args.trials, "Random trials for the probe sweep");
  ledger->add_option("--seed", ledger_args.seed, "Base seed");
  ledger->add_option("--tol", ledger_args.tol, "Relative Loewner tolerance");
  ledger->add_option("--out", ledger_args.out, "JSON document with every probe verdict");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Write a random instance as JSON files");
  gen->add_option("--dim", gen_args.dim, "Matrix dimension");
  gen->add_option("--n", gen_args.n, "Tuple size");
  gen->add_option("--m", gen_args.m, "Lower spectral bound");
  gen->add_option("--M", gen_args.M, "Upper spectral bound");
  gen->add_option("--seed", gen_args.seed, "Base seed");
  gen->add_option("--trial", gen_args.trial, "Trial index")->check(CLI::NonNegativeNumber);
  gen->add_option("--map", gen_args.map, "Map family");
  gen->add_flag("--tight,!--no-tight", gen_args.tight, "Force the bounds to be attained");
  gen->add_option("--out", gen_args.out, "Output directory");

  ConstantsArgs const_args;
  auto* constants = app.add_subcommand("constants", "Print the inequality constants");
  constants->add_option("--m", const_args.m, "Lower spectral bound")->required();
  constants->add_option("--M", const_args.M, "Upper spectral bound")->required();
  constants->add_option("--p", const_args.p, "Exponent p");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*mean) return run_mean(mean_args, out, err);
    if (*verify) return run_verify(verify_args, out, err);
    if (*ledger) return run_ledger(ledger_args, out);
    if (*gen) return run_gen(gen_args, out);
    if (*constants) return run_constants(const_args, out);
  } catch (const Error& e) {
    err << "meanforge: " << e.what() << '\n';
    return exit_for(e);
  }
  return kExitUsage;
}

}  // namespace meanforge
