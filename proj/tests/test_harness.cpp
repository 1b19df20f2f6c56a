#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace meanforge;
using namespace testing_support;

namespace {

TrialConfig small_config(int trials) {
  TrialConfig cfg;
  cfg.trials = trials;
  cfg.seed = 99;
  cfg.dims = {2, 3};
  cfg.tuple_sizes = {2, 3};
  cfg.bounds = {{1.0, 4.0}};
  cfg.t_grid = {-0.5, 0.5, 1.0};
  cfg.p_grid = {1.0, 2.0, 3.0};
  cfg.alpha_grid = {0.5, 2.0};
  cfg.norm_kinds = {NormKind::spectral(), NormKind::trace()};
  return cfg;
}

}  // namespace

TEST_CASE("Haar unitaries") {
  Rng rng(1);
  const Matrix u1 = gen_haar_unitary(1, rng);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-15);
  for (int n = 1; n <= 8; ++n) {
    const Matrix u = gen_haar_unitary(n, rng);
    CHECK((u.adjoint() * u - Matrix::Identity(n, n)).norm() <= 1e-12);
  }
  Rng a(42);
  Rng b(42);
  CHECK(gen_haar_unitary(4, a) == gen_haar_unitary(4, b));
}

TEST_CASE("Haar unitaries have the expected mean squared entry") {
  // E|U_ij|^2 = 1/n for Haar measure.
  Rng rng(2);
  const int n = 3;
  double sum = 0.0;
  const int draws = 2000;
  for (int k = 0; k < draws; ++k) sum += std::norm(gen_haar_unitary(n, rng)(0, 0));
  CHECK(sum / draws == doctest::Approx(1.0 / n).epsilon(0.05));
}

TEST_CASE("HPD matrices with prescribed bounds") {
  Rng rng(3);
  CHECK(gen_hpd(3, 2.0, 2.0, true, rng).matrix() == 2.0 * Matrix::Identity(3, 3));
  const RealVector lam = eigvalsh(gen_hpd(2, 1.0, 4.0, true, rng));
  CHECK(lam(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lam(1) == doctest::Approx(4.0).epsilon(1e-12));
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralBounds b = spectral_bounds(gen_hpd(5, 1.0, 10.0, trial % 2 == 0, rng));
    CHECK(b.m >= 1.0 - 1e-10);
    CHECK(b.M <= 10.0 + 1e-10);
  }
  try {
    gen_hpd(2, 3.0, 1.0, false, rng);
    FAIL("expected BadBounds");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadBounds);
  }
  CHECK_THROWS_AS(gen_hpd(2, 0.0, 1.0, false, rng), Error);
}

TEST_CASE("instances are a deterministic function of seed and index") {
  const TrialConfig cfg;
  for (int i : {0, 7, 123}) {
    const Instance a = gen_instance(cfg, i);
    const Instance b = gen_instance(cfg, i);
    REQUIRE(a.tuple.size() == b.tuple.size());
    for (std::size_t k = 0; k < a.tuple.size(); ++k) CHECK(a.tuple[k].matrix() == b.tuple[k].matrix());
    CHECK(a.tuple.weights().values() == b.tuple.weights().values());
    REQUIRE(a.map.kraus().size() == b.map.kraus().size());
    for (std::size_t k = 0; k < a.map.kraus().size(); ++k) CHECK(a.map.kraus()[k] == b.map.kraus()[k]);
  }
  CHECK(gen_instance(cfg, 0).tuple[0].matrix() != gen_instance(cfg, 27).tuple[0].matrix());
  TrialConfig other = cfg;
  other.seed += 1;
  CHECK(gen_instance(cfg, 5).tuple[0].matrix() != gen_instance(other, 5).tuple[0].matrix());
}

TEST_CASE("instances follow the configured grid") {
  const TrialConfig cfg;
  std::set<std::tuple<int, std::size_t, double>> cells;
  for (int i = 0; i < 27; ++i) {
    const Instance inst = gen_instance(cfg, i);
    cells.insert({inst.dim, inst.tuple.size(), inst.bounds.M});
    CHECK(inst.map.label() == to_string(cfg.map_kinds[static_cast<std::size_t>(i) % cfg.map_kinds.size()]));
    CHECK(verify_unital(inst.map).ok);
    const auto& w = inst.tuple.weights().values();
    double sum = 0.0;
    for (double x : w) sum += x;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    if (i % 10 == 9) CHECK(w[0] == 0.0);
    // Tight mode: every matrix attains both bounds.
    for (const auto& a : inst.tuple.matrices()) {
      const SpectralBounds b = spectral_bounds(a);
      CHECK(b.m == doctest::Approx(inst.bounds.m).epsilon(1e-10));
      CHECK(b.M == doctest::Approx(inst.bounds.M).epsilon(1e-10));
    }
  }
  CHECK(cells.size() == 27);
}

TEST_CASE("single-matrix tuples have every mean equal to the matrix") {
  TrialConfig cfg;
  cfg.tuple_sizes = {1};
  for (int i = 0; i < 6; ++i) {
    const Instance inst = gen_instance(cfg, i);
    const Matrix& a = inst.tuple[0].matrix();
    CHECK((power_mean(inst.tuple, 0.5).mean.matrix() - a).norm() < 1e-12);
    CHECK((karcher_mean(inst.tuple).mean.matrix() - a).norm() < 1e-12);
    CHECK((harmonic_mean(inst.tuple).matrix() - a).norm() < 1e-10 * a.norm());
  }
}

TEST_CASE("configuration validation") {
  TrialConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrialConfig{};
  cfg.bounds = {{2.0, 1.0}};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrialConfig{};
  cfg.suite = {"nope"};
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK_NOTHROW(TrialConfig{}.validate());
}

TEST_CASE("suite accounting") {
  const TrialConfig cfg = small_config(12);
  const SuiteReport report = run_suite_serial(cfg);
  CHECK(report.trials_run == 12);
  CHECK(report.instance_errors == 0);
  CHECK(report.theorem_failures() == 0);
  CHECK(report.checks.size() == catalog().size());
  const auto grid = cfg.grid();
  for (const auto& s : report.checks) {
    INFO(s.id);
    CHECK(s.evaluations == s.passes + s.failures + s.skips);
    std::set<std::tuple<double, double, double, std::string>> points;
    const unsigned uses = find_check(s.id).uses;
    for (const auto& q : grid) {
      points.insert({(uses & kUsesT) ? q.t : 0.0, (uses & kUsesP) ? q.p : 0.0,
                     (uses & kUsesAlpha) ? q.alpha_lemma : 0.0,
                     (uses & kUsesNorm) ? q.norm.name() : ""});
    }
    CHECK(s.evaluations == static_cast<long>(points.size()) * cfg.trials);
  }
  CHECK(report.solver.nonconverged == 0);
  CHECK(report.solver.max_power_certificate <= 1e-10);
  CHECK(report.solver.max_karcher_residual_per_dim <= 1e-9);
}

TEST_CASE("parallel and serial drivers give identical reports") {
  const TrialConfig cfg = small_config(10);
  std::vector<int> order;
  const SuiteReport serial = run_suite_serial(cfg);
  const SuiteReport parallel = run_suite(cfg, 3, [&](const TrialResult& r) { order.push_back(r.trial); });
  CHECK(report_to_json(serial, false).dump() == report_to_json(parallel, false).dump());
  REQUIRE(order.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(order[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("trial execution order does not change verdicts") {
  const TrialConfig cfg = small_config(6);
  const TrialResult late_first = run_trial(cfg, 5);
  for (int i = 0; i < 5; ++i) run_trial(cfg, i);
  const TrialResult late_again = run_trial(cfg, 5);
  CHECK(trial_to_json(cfg, late_first).dump() == trial_to_json(cfg, late_again).dump());
  REQUIRE(late_first.verdicts.size() == late_again.verdicts.size());
  for (std::size_t k = 0; k < late_first.verdicts.size(); ++k) {
    CHECK(late_first.verdicts[k].slack == late_again.verdicts[k].slack);
  }
}

TEST_CASE("reports are reproducible apart from timing") {
  const TrialConfig cfg = small_config(5);
  const Json a = report_to_json(run_suite(cfg));
  const Json b = report_to_json(run_suite(cfg));
  CHECK(a.contains("timing"));
  Json a2 = a;
  Json b2 = b;
  a2.erase("timing");
  b2.erase("timing");
  CHECK(a2.dump() == b2.dump());
  CHECK(a2.dump() == report_to_json(run_suite(cfg), false).dump());
}

TEST_CASE("degenerate configurations pass with equality") {
  TrialConfig cfg = small_config(6);
  cfg.bounds = {{2.0, 2.0}};
  const SuiteReport report = run_suite(cfg);
  CHECK(report.theorem_failures() == 0);
  for (const auto& s : report.checks) {
    if (s.id == "thm_p4" || s.id == "arith_below_power" || s.id == "arith_below_karcher" ||
        s.id == "amgm_counterpart") {
      INFO(s.id);
      REQUIRE(s.has_min);
      CHECK(std::abs(s.min_relative_slack) <= 1e-9);
    }
  }
}

TEST_CASE("the power-mean identity probe is far from zero on random pairs") {
  TrialConfig cfg = small_config(20);
  cfg.t_grid = {0.5, 1.0};
  cfg.suite = {"ledger_fact_p30", "geo_reverse_p"};
  const SuiteReport report = run_suite(cfg);
  for (const auto& s : report.checks) {
    if (s.id == "ledger_fact_p30") CHECK(s.max_distance > 0.1);
    if (s.id == "geo_reverse_p") CHECK(s.failures == 0);
  }
}

TEST_CASE("trial lines and report JSON") {
  const TrialConfig cfg = small_config(2);
  const TrialResult r = run_trial(cfg, 1);
  const Json line = trial_to_json(cfg, r);
  CHECK(line["trial"] == 1);
  CHECK(line["seed"] == cfg.seed);
  CHECK(line["passes"].get<long>() + line["failures"].get<long>() + line["skips"].get<long>() ==
        static_cast<long>(r.verdicts.size()));
  const Json report = report_to_json(run_suite_serial(cfg));
  CHECK(report["version"] == kVersion);
  CHECK(report["config"]["seed"] == cfg.seed);
  CHECK(report["checks"].contains("thm17"));
  CHECK(report["checks"]["ledger_fact_p30"].contains("max_distance"));
  CHECK(report["checks"]["thm17"]["argmin"]["trial"].is_number());
}

TEST_CASE("matrix, weight and map JSON round-trip") {
  Rng rng(5);
  const Matrix a = random_complex(3, 3, rng);
  CHECK(matrix_from_json(matrix_to_json(a)) == a);
  const Matrix rect = random_complex(3, 2, rng);
  CHECK(matrix_from_json(matrix_to_json(rect)) == rect);
  const Json real = Json::parse(R"({"dim": 2, "re": [[2, 1], [1, 2]]})");
  CHECK(matrix_from_json(real) == real2(2, 1, 1, 2));
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dim": 2, "re": [[1, 2]]})")), Error);
  const WeightVector w({0.25, 0.75});
  CHECK(weights_from_json(weights_to_json(w)).values() == w.values());
  const UcpMap phi = gen_map(MapKind::Compression, 3, rng);
  const UcpMap back = map_from_json(map_to_json(phi));
  CHECK(back.in_dim() == 3);
  CHECK(back.out_dim() == 2);
  CHECK(back.kraus()[0] == phi.kraus()[0]);
}

TEST_CASE("parameter grids are validated") {
  for (double t : {0.0, 1.5, -2.0}) {
    TrialConfig cfg;
    cfg.t_grid = {0.5, t};
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  TrialConfig cfg;
  cfg.p_grid = {0.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrialConfig{};
  cfg.alpha_grid = {-1.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
}
