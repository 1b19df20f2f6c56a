#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "support.hpp"

using namespace meanforge;
using namespace testing_support;

namespace {

MatrixTuple scalar_pair(double a, double b, double wa = 0.5) {
  return MatrixTuple({HpdMatrix::scalar(1, a), HpdMatrix::scalar(1, b)}, WeightVector({wa, 1.0 - wa}));
}

CheckParams with(double t, double p, double alpha = 1.0, NormKind norm = NormKind::spectral()) {
  return CheckParams{t, p, alpha, norm};
}

std::vector<CheckParams> default_grid() { return TrialConfig{}.grid(); }

Instance instance(int trial) {
  TrialConfig cfg;
  return gen_instance(cfg, trial);
}

/// lambda_min(R - L) with the reference solver.
double oracle_slack(const Matrix& l, const Matrix& r) {
  const Matrix d = r - l;
  return oracle_eigenvalues((d + d.adjoint()) * 0.5)(0);
}

Matrix oracle_power(const Matrix& a, double p) {
  return oracle_function((a + a.adjoint()) * 0.5, [p](double x) { return std::pow(x, p); });
}

}  // namespace

TEST_CASE("constant spot values") {
  CHECK(constant_of("K", 1, 4, 2) == doctest::Approx(1.5625).epsilon(1e-15));
  CHECK(constant_of("alpha_thm", 1, 2, 4) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(constant_of("alpha_anticomm", 1, 2, 4) == doctest::Approx(3.181980515339464).epsilon(1e-14));
  CHECK(constant_of("alpha_anticomm", 1, 2, 1) == doctest::Approx(1.125).epsilon(1e-15));
  CHECK(constant_of("c23", 1, 2, 2) == doctest::Approx(3.910660743713379).epsilon(1e-14));
  CHECK(constant_of("c23", 1, 4, 2) == doctest::Approx(121.53905117884278).epsilon(1e-14));
  CHECK(constant_of("c31", 1, 4, 3) == doctest::Approx(1.953125).epsilon(1e-15));
  CHECK(constant_of("thm_p4", 1, 2, 4) == doctest::Approx(std::pow(2.25, 4)).epsilon(1e-14));
  CHECK(constant_of("amgm_counterpart", 1, 4, 2) == doctest::Approx(1.5625));
}

TEST_CASE("constants collapse to one when m equals M") {
  for (double c : {0.3, 1.0, 7.0}) {
    CHECK(constant_of("K", c, c, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(constant_of("alpha_thm", c, c, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(constant_of("thm_p4", c, c, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(constant_of("c4", c, c, 2) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("constants reject bad inputs") {
  try {
    constant_of("K", 2, 1, 2);
    FAIL("expected ParamOutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParamOutOfDomain);
  }
  try {
    constant_of("reverse_ando_p", 1, 2, 2);
    FAIL("expected ParamOutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParamOutOfDomain);
  }
  try {
    constant_of("no_such_check", 1, 2, 2);
    FAIL("expected UnknownCheck");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCheck);
  }
}

TEST_CASE("constants are monotone in the bounds") {
  const std::vector<std::string> ids{"K", "alpha_thm", "alpha_anticomm", "c4", "c23", "c31"};
  for (const auto& id : ids)
    for (double p : {0.5, 1.0, 2.0, 3.0, 4.0})
      for (double m = 0.1; m < 5.0; m *= 1.7)
        for (double M = m; M < 20.0; M *= 1.9) {
          const double base = constant_of(id, m, M, p);
          CHECK(constant_of(id, m, M * 1.01, p) >= base * (1.0 - 1e-14));
          if (m * 1.01 <= M) CHECK(constant_of(id, m * 1.01, M, p) <= base * (1.0 + 1e-14));
        }
}

TEST_CASE("catalog contents") {
  const std::vector<std::string> required{
      "interp_power",     "interp_karcher",   "amgm",          "choi",
      "ando_geo",         "reverse_ando_p",   "marshall_olkin", "phi_power_15",
      "dehghani_p",       "thm_p4",           "haj2_scalar",   "geo_reverse_p",
      "karcher_reverse_p", "arith_below_power", "amgm_counterpart", "arith_below_karcher",
      "chain_13",         "chain_26",         "thm17",         "thm17_27",
      "thm17_28",         "thm17_karcher",    "anticomm_power", "anticomm_karcher",
      "norm_upper_18",    "norm_lower_18",    "refine23",      "refine34",
      "lemma6_suite",     "lemma19_suite"};
  const auto theorems = theorem_check_ids();
  for (const auto& id : required) {
    CHECK(std::find(theorems.begin(), theorems.end(), id) != theorems.end());
  }
  CHECK(find_check("ledger_fact_p30").status == CheckStatus::Probe);
  std::set<std::string> unique;
  for (const auto& c : catalog()) {
    CHECK(unique.insert(c.id).second);
    CHECK_FALSE(c.statement.empty());
  }
  CHECK_THROWS_AS(find_check("missing"), Error);
}

TEST_CASE("interpolation on scalars") {
  const Verdict v = evaluate_check("interp_power", scalar_pair(1, 9), identity_map(1), with(0.5, 2));
  CHECK(v.holds);
  CHECK(v.outcome == Outcome::Pass);
  // 1.8 <= 4 <= 5: the smaller gap is 5 - 4.
  CHECK(v.slack == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(v.notes.find("harmonic<=P_t") != std::string::npos);
}

TEST_CASE("AM-GM counterpart on scalars") {
  const Verdict v = evaluate_check("amgm_counterpart", scalar_pair(1, 4), identity_map(1), {});
  CHECK(v.holds);
  CHECK(v.constant_value == doctest::Approx(1.5625));
  CHECK(v.slack == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("power-mean identity probe on scalars") {
  const Verdict v = evaluate_check("ledger_fact_p30", scalar_pair(1, 9), identity_map(1), with(1.0, 2));
  CHECK(v.status == CheckStatus::Probe);
  CHECK_FALSE(v.holds);
  CHECK(-v.slack == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-12));
  CHECK(-v.slack == doctest::Approx(0.5108).epsilon(1e-4));
  CHECK(v.lhs_extremes.max == doctest::Approx(5.0));
  CHECK(v.rhs_extremes.max == doctest::Approx(3.0));
  const Verdict g = evaluate_check("geo_reverse_p", scalar_pair(1, 9), identity_map(1), with(1.0, 2));
  CHECK(g.holds);
}

TEST_CASE("printed anticommutator form fails on a depolarized diagonal") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const MatrixTuple tuple({HpdMatrix::checked(a)}, WeightVector({1.0}), SpectralBounds{1.0, 2.0});
  const Verdict printed = evaluate_check("anticomm_printed", tuple, depolarizing(2), with(1.0, 1.0));
  CHECK_FALSE(printed.holds);
  CHECK(printed.lhs_extremes.max == doctest::Approx(8.0 / 3.0));
  CHECK(printed.constant_value == doctest::Approx(2.25));
  const Verdict mapped = evaluate_check("anticomm_power", tuple, depolarizing(2), with(1.0, 1.0));
  CHECK(mapped.holds);
}

TEST_CASE("degenerate instances give equality") {
  const HpdMatrix c = HpdMatrix::scalar(3, 2.5);
  const MatrixTuple tuple({c, c, c}, WeightVector({0.2, 0.3, 0.5}), SpectralBounds{2.5, 2.5});
  Rng rng(4);
  const UcpMap phi = gen_map(MapKind::Random, 3, rng);
  struct Case {
    const char* id;
    CheckParams params;
  };
  for (const Case& k : {Case{"thm_p4", with(0.5, 2)}, Case{"arith_below_power", with(0.5, 2)},
                        Case{"arith_below_power", with(-0.5, 2)}, Case{"arith_below_karcher", {}},
                        Case{"amgm_counterpart", {}}, Case{"refine23", with(0.5, 2)}}) {
    const Verdict v = evaluate_check(k.id, tuple, phi, k.params);
    INFO(k.id);
    CHECK(v.holds);
    CHECK(std::abs(v.relative_slack) <= 1e-9);
  }
  CHECK(evaluate_check("thm_p4", tuple, phi, with(0.5, 2)).constant_value == doctest::Approx(1.0));

  for (const Verdict& v : run_catalog(tuple, phi, default_grid())) {
    if (v.status == CheckStatus::Theorem && v.outcome != Outcome::Skip) {
      INFO(v.check_id << " " << v.notes);
      CHECK(v.holds);
    }
  }
}

TEST_CASE("hypotheses are enforced, never coerced") {
  const MatrixTuple tuple = scalar_pair(1, 9);
  try {
    evaluate_check("reverse_ando_p", tuple, identity_map(1), with(0.5, 2));
    FAIL("expected ParamOutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParamOutOfDomain);
  }
  CHECK_THROWS_AS(evaluate_check("phi_power_15", tuple, identity_map(1), with(-0.5, 2)), Error);
  CHECK_THROWS_AS(evaluate_check("interp_power", tuple, identity_map(1), with(0.0, 2)), Error);
  CHECK_THROWS_AS(evaluate_check("chain_26", tuple, identity_map(1), with(0.5, 2)), Error);
  CHECK_THROWS_AS(evaluate_check("thm17_28", tuple, identity_map(1), with(0.5, 2)), Error);

  const MatrixTuple single({HpdMatrix::scalar(2, 1.0)}, WeightVector({1.0}));
  const auto verdicts = run_catalog(single, identity_map(2), {with(0.5, 2)}, {1e-8, {}, {"amgm"}});
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].outcome == Outcome::Skip);
  CHECK(verdicts[0].notes.find("two matrices") != std::string::npos);
}

TEST_CASE("Ky Fan orders above the dimension are skipped") {
  const Instance inst = instance(0);
  RunOptions opts;
  opts.ids = {"norm_upper_18", "norm_lower_18"};
  const auto verdicts =
      run_catalog(inst.tuple, inst.map, {with(0.5, 2, 1, NormKind::ky_fan(inst.dim + 1))}, opts);
  REQUIRE(verdicts.size() == 2);
  for (const auto& v : verdicts) {
    CHECK(v.outcome == Outcome::Skip);
    CHECK(v.notes.find("BadK") != std::string::npos);
  }
}

TEST_CASE("the norm lemma keeps part (ii) to exponents of at least one") {
  const Instance inst = instance(1);
  const Verdict low = evaluate_check("lemma6_suite", inst.tuple, inst.map, with(0.5, 2, 0.5));
  CHECK(low.holds);
  CHECK(low.notes.find("(ii) omitted") != std::string::npos);
  const Verdict high = evaluate_check("lemma6_suite", inst.tuple, inst.map, with(0.5, 2, 2.0));
  CHECK(high.holds);
  CHECK(high.notes.find("(ii) rel_slack") != std::string::npos);
}

TEST_CASE("verdicts are counted once per distinct projected grid point") {
  const Instance inst = instance(2);
  const auto grid = default_grid();
  const auto verdicts = run_catalog(inst.tuple, inst.map, grid);
  std::size_t expected = 0;
  for (const auto& c : catalog()) {
    std::set<std::tuple<double, double, double, std::string>> points;
    for (const auto& q : grid) {
      points.insert({(c.uses & kUsesT) ? q.t : 0.0, (c.uses & kUsesP) ? q.p : 0.0,
                     (c.uses & kUsesAlpha) ? q.alpha_lemma : 0.0,
                     (c.uses & kUsesNorm) ? q.norm.name() : ""});
    }
    expected += points.size();
  }
  CHECK(verdicts.size() == expected);
}

TEST_CASE("check slacks agree with reference computations") {
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = instance(trial);
    const MatrixTuple& t = inst.tuple;
    const UcpMap& phi = inst.map;
    const Constants c(inst.bounds.m, inst.bounds.M);
    INFO("trial " << trial);

    // Marshall-Olkin: Phi(A_i^-1) <= K Phi(A_i)^-1, worst relative slack over i.
    {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& a : t.matrices()) {
        const Matrix lhs = phi.apply(a.matrix().inverse());
        const Matrix rhs = c.K() * phi.apply(a.matrix()).inverse();
        const RealVector ll = oracle_eigenvalues(lhs);
        const RealVector rl = oracle_eigenvalues(rhs);
        const double scale = 1.0 + ll.cwiseAbs().maxCoeff() + rl.cwiseAbs().maxCoeff();
        worst = std::min(worst, oracle_slack(lhs, rhs) / scale);
      }
      const Verdict v = evaluate_check("marshall_olkin", t, phi, {});
      CHECK(v.relative_slack == doctest::Approx(worst).epsilon(1e-8));
    }
    // Arithmetic mean below K times the power mean, via a reference power.
    {
      const Matrix a = arithmetic_mean(t).matrix();
      const Matrix p = power_mean(t, 0.5).mean.matrix();
      const Verdict v = evaluate_check("arith_below_power", t, phi, with(0.5, 2));
      CHECK(v.slack == doctest::Approx(oracle_slack(a, c.K() * p)).epsilon(1e-8));
    }
    // thm_p4 at p = 3 with Eigen-side powers.
    {
      const Matrix x = power_mean(map_tuple(phi, t), 0.5).mean.matrix();
      const Matrix y = phi.apply(power_mean(t, 0.5).mean.matrix());
      const double c4p = std::pow(c.c4(3.0), 3.0);
      const Verdict v = evaluate_check("thm_p4", t, phi, with(0.5, 3.0));
      const double expected = oracle_slack(oracle_power(x, 3.0), c4p * oracle_power(y, 3.0));
      CHECK(v.slack == doctest::Approx(expected).epsilon(1e-7).scale(1.0 + c4p * std::pow(inst.bounds.M, 3)));
    }
    // Anticommutator at p = 2 with the mapped power mean.
    if (t.size() >= 1) {
      const Matrix x = power_mean(map_tuple(phi, t), -0.5).mean.matrix();
      const Matrix y = phi.apply(power_mean(t, -0.5).mean.matrix());
      const Matrix z = oracle_power(x, 2.0) * oracle_power(y, -2.0);
      const double top = oracle_eigenvalues((z + z.adjoint()) * 0.5)(x.rows() - 1);
      const Verdict v = evaluate_check("anticomm_power", t, phi, with(-0.5, 2.0));
      const double bound = 2.0 * std::pow(c.alpha_anticomm(2.0), 2.0);
      CHECK(v.constant_value == doctest::Approx(bound));
      CHECK(v.slack <= bound - top + 1e-9 * (1.0 + bound + top));
    }
  }
}

TEST_CASE("the reverse power-mean bound agrees in sign with its composite form") {
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = instance(trial);
    for (double t : {0.1, 0.5, 1.0}) {
      const Verdict phi15 = evaluate_check("phi_power_15", inst.tuple, inst.map, with(t, 2));
      const Verdict p4 = evaluate_check("thm_p4", inst.tuple, inst.map, with(t, 2));
      if (!(phi15.holds && p4.holds)) continue;
      const Matrix x = power_mean(map_tuple(inst.map, inst.tuple), t).mean.matrix();
      const Matrix y = inst.map.apply(power_mean(inst.tuple, t).mean.matrix());
      const double c4p = std::pow(Constants(inst.bounds.m, inst.bounds.M).c4(2.0), 2.0);
      const LoewnerResult direct = loewner_slack(oracle_power(x, 2.0), c4p * oracle_power(y, 2.0), 1e-8);
      CHECK(direct.holds == p4.holds);
      CHECK((direct.slack >= 0.0) == (p4.slack >= 0.0));
    }
  }
}

TEST_CASE("theorem checks hold on a sample of random instances") {
  const auto grid = default_grid();
  for (int trial = 0; trial < 27; ++trial) {
    const Instance inst = instance(trial);
    for (const Verdict& v : run_catalog(inst.tuple, inst.map, grid)) {
      if (v.status != CheckStatus::Theorem) continue;
      INFO(v.check_id << " trial " << trial << ": " << v.notes);
      CHECK_FALSE(v.solver_failure);
      if (v.outcome != Outcome::Skip) CHECK(v.holds);
    }
  }
}

TEST_CASE("context rejects maps of the wrong input dimension") {
  try {
    InstanceContext ctx(scalar_pair(1, 2), identity_map(2));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}
