#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "meanforge/inequalities.hpp"

namespace meanforge {

namespace {

using Reason = std::optional<std::string>;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double radius(Extremes e) { return std::max(std::abs(e.min), std::abs(e.max)); }

Extremes extremes_of(const Matrix& a) {
  const RealVector lam = eigvalsh(a);
  return {lam(0), lam(lam.size() - 1)};
}

/// Extremes of c * S^p from the spectrum of S.
Extremes power_extremes(const SpectralMatrix& s, double p, double c = 1.0) {
  const double a = c * std::pow(s.min(), p);
  const double b = c * std::pow(s.max(), p);
  return {std::min(a, b), std::max(a, b)};
}

Term loewner_term(std::string label, const Matrix& lhs, const Matrix& rhs, Extremes le,
                  Extremes re, double tol) {
  const LoewnerResult r = loewner_slack_with_radii(lhs, rhs, radius(le), radius(re), tol);
  return Term{std::move(label), r.slack, r.scale, r.holds, le, re};
}

Term loewner_term(std::string label, const Matrix& lhs, const Matrix& rhs, double tol) {
  return loewner_term(std::move(label), lhs, rhs, extremes_of(lhs), extremes_of(rhs), tol);
}

/// lhs <= rhs for reals.
Term scalar_term(std::string label, double lhs, double rhs, double tol) {
  Term t;
  t.label = std::move(label);
  t.slack = rhs - lhs;
  t.scale = 1.0 + std::abs(lhs) + std::abs(rhs);
  t.holds = t.slack >= -tol * t.scale;
  t.lhs = {lhs, lhs};
  t.rhs = {rhs, rhs};
  return t;
}

struct Margin {
  double value;  // positive means the statement is true
  double scale;
};

/// Several statements claimed equivalent: all clearly decided ones must agree.
Term consistency_term(std::string label, const std::vector<Margin>& margins, double tol) {
  int yes = 0;
  int no = 0;
  double worst_yes = 0.0;
  double worst_no = 0.0;
  for (const Margin& m : margins) {
    const double rel = m.value / m.scale;
    if (rel > tol) {
      ++yes;
      worst_yes = std::max(worst_yes, rel);
    } else if (rel < -tol) {
      ++no;
      worst_no = std::max(worst_no, -rel);
    }
  }
  Term t;
  t.label = std::move(label);
  t.scale = 1.0;
  t.holds = yes == 0 || no == 0;
  t.slack = t.holds ? 0.0 : -std::min(worst_yes, worst_no);
  return t;
}

Matrix identity(int n) { return Matrix::Identity(n, n); }

std::pair<const HpdMatrix*, const HpdMatrix*> first_pair(const InstanceContext& ctx) {
  const auto& tuple = ctx.tuple();
  return {&tuple[0], &tuple[1]};
}

/// Weight of the second matrix within the first pair.
double pair_alpha(const InstanceContext& ctx) {
  const auto& w = ctx.tuple().weights();
  const double total = w[0] + w[1];
  return total > 0.0 ? w[1] / total : 0.5;
}

Reason needs_pair(const InstanceContext& ctx) {
  if (ctx.tuple().size() < 2) return std::string("needs at least two matrices");
  return std::nullopt;
}

Reason p_in(double p, double lo, bool lo_open, double hi, bool hi_open, const char* text) {
  const bool ok_lo = lo_open ? p > lo : p >= lo;
  const bool ok_hi = hi_open ? p < hi : p <= hi;
  if (ok_lo && ok_hi) return std::nullopt;
  return "p=" + num(p) + " outside " + text;
}

Reason t_positive(double t) {
  if (t > 0.0) return std::nullopt;
  return "t=" + num(t) + " outside (0, 1]";
}

constexpr double kInf = std::numeric_limits<double>::infinity();

double one(const Constants&, const CheckParams&) { return 1.0; }
double kant(const Constants& c, const CheckParams&) { return c.K(); }
double kant_p(const Constants& c, const CheckParams& q) { return std::pow(c.K(), q.p); }
double c4_p(const Constants& c, const CheckParams& q) { return std::pow(c.c4(q.p), q.p); }
double thm_p(const Constants& c, const CheckParams& q) { return std::pow(c.alpha_thm(q.p), q.p); }
double anti_p(const Constants& c, const CheckParams& q) {
  return 2.0 * std::pow(c.alpha_anticomm(q.p), q.p);
}
double c23(const Constants& c, const CheckParams& q) { return c.c23(q.p); }

// X^p <= c Y^p with both sides from cached spectra.
Term power_term(std::string label, const SpectralMatrix& x, const SpectralMatrix& y, double p,
                double c, double tol) {
  return loewner_term(std::move(label), x.power(p), c * y.power(p), power_extremes(x, p),
                      power_extremes(y, p, c), tol);
}

// lambda_max(X^p Y^{-p} + Y^{-p} X^p) <= bound.
Term anticommutator_term(std::string label, const SpectralMatrix& x, const SpectralMatrix& y,
                         double p, double bound, double tol) {
  const Matrix z = x.power(p) * y.power(-p);
  const RealVector lam = eigvalsh(hermitize(z + z.adjoint()));
  return scalar_term(std::move(label), lam(lam.size() - 1), bound, tol);
}

std::vector<CheckDefinition> build_catalog() {
  std::vector<CheckDefinition> c;

  c.push_back({"interp_power", CheckStatus::Theorem, kUsesT,
               "(sum w_i A_i^-1)^-1 <= P_t <= sum w_i A_i", nullptr, nullptr, one,
               [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 const auto& h = ctx.harmonic();
                 const auto& p = ctx.power_mean(q.t);
                 const auto& a = ctx.arithmetic();
                 e.terms.push_back(loewner_term("harmonic<=P_t", h.matrix, p.matrix,
                                                power_extremes(h, 1), power_extremes(p, 1),
                                                ctx.tol()));
                 e.terms.push_back(loewner_term("P_t<=arithmetic", p.matrix, a.matrix,
                                                power_extremes(p, 1), power_extremes(a, 1),
                                                ctx.tol()));
                 return e;
               }});

  c.push_back({"interp_karcher", CheckStatus::Theorem, kUsesNone,
               "(sum w_i A_i^-1)^-1 <= Lambda <= sum w_i A_i", nullptr, nullptr, one,
               [](InstanceContext& ctx, const CheckParams&) {
                 Evaluation e;
                 const auto& h = ctx.harmonic();
                 const auto& l = ctx.karcher();
                 const auto& a = ctx.arithmetic();
                 e.terms.push_back(loewner_term("harmonic<=Lambda", h.matrix, l.matrix,
                                                power_extremes(h, 1), power_extremes(l, 1),
                                                ctx.tol()));
                 e.terms.push_back(loewner_term("Lambda<=arithmetic", l.matrix, a.matrix,
                                                power_extremes(l, 1), power_extremes(a, 1),
                                                ctx.tol()));
                 return e;
               }});

  c.push_back({"amgm", CheckStatus::Theorem, kUsesNone, "A # B <= (A + B) / 2", nullptr,
               needs_pair, one, [](InstanceContext& ctx, const CheckParams&) {
                 const auto [a, b] = first_pair(ctx);
                 Evaluation e;
                 e.terms.push_back(loewner_term("geo<=arith", geometric_mean(*a, *b).matrix(),
                                                0.5 * (a->matrix() + b->matrix()), ctx.tol()));
                 return e;
               }});

  c.push_back({"choi", CheckStatus::Theorem, kUsesNone, "Phi(A)^-1 <= Phi(A^-1)", nullptr,
               nullptr, one, [](InstanceContext& ctx, const CheckParams&) {
                 Evaluation e;
                 const auto& tuple = ctx.tuple();
                 for (std::size_t i = 0; i < tuple.size(); ++i) {
                   const Matrix lhs = matrix_inverse(ctx.map().apply(tuple[i].matrix()));
                   const Matrix rhs = ctx.map().apply(matrix_inverse(tuple[i]));
                   e.terms.push_back(loewner_term("A_" + std::to_string(i + 1), lhs, rhs,
                                                  ctx.tol()));
                 }
                 return e;
               }});

  c.push_back({"ando_geo", CheckStatus::Theorem, kUsesNone, "Phi(A # B) <= Phi(A) # Phi(B)",
               nullptr, needs_pair, one, [](InstanceContext& ctx, const CheckParams&) {
                 const auto [a, b] = first_pair(ctx);
                 const auto& phi = ctx.map();
                 Evaluation e;
                 e.terms.push_back(loewner_term(
                     "ando", phi.apply(geometric_mean(*a, *b).matrix()),
                     geometric_mean(phi.apply(*a), phi.apply(*b)).matrix(), ctx.tol()));
                 return e;
               }});

  c.push_back({"reverse_ando_p", CheckStatus::Theorem, kUsesP,
               "(Phi(A) # Phi(B))^p <= ((M+m)/(2 sqrt(Mm)))^p Phi(A # B)^p, 0 < p <= 1",
               [](const CheckParams& q) { return p_in(q.p, 0, true, 1, false, "(0, 1]"); },
               needs_pair,
               [](const Constants& c, const CheckParams& q) { return c.c31(q.p); },
               [](InstanceContext& ctx, const CheckParams& q) {
                 const auto [a, b] = first_pair(ctx);
                 const auto& phi = ctx.map();
                 const SpectralMatrix lhs(geometric_mean(phi.apply(*a), phi.apply(*b)));
                 const SpectralMatrix rhs(phi.apply(geometric_mean(*a, *b)));
                 Evaluation e;
                 e.constant = ctx.constants().c31(q.p);
                 e.terms.push_back(power_term("reverse_ando", lhs, rhs, q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"marshall_olkin", CheckStatus::Theorem, kUsesNone, "Phi(A^-1) <= K Phi(A)^-1",
               nullptr, nullptr, kant, [](InstanceContext& ctx, const CheckParams&) {
                 Evaluation e;
                 e.constant = ctx.constants().K();
                 const auto& tuple = ctx.tuple();
                 for (std::size_t i = 0; i < tuple.size(); ++i) {
                   const Matrix lhs = ctx.map().apply(matrix_inverse(tuple[i]));
                   const Matrix rhs =
                       e.constant * matrix_inverse(ctx.map().apply(tuple[i].matrix()));
                   e.terms.push_back(loewner_term("A_" + std::to_string(i + 1), lhs, rhs,
                                                  ctx.tol()));
                 }
                 return e;
               }});

  c.push_back({"phi_power_15", CheckStatus::Theorem, kUsesT, "Phi(P_t(A)) <= P_t(Phi(A))",
               [](const CheckParams& q) { return t_positive(q.t); }, nullptr, one,
               [](InstanceContext& ctx, const CheckParams& q) {
                 const auto& l = ctx.phi_of_power_mean(q.t);
                 const auto& r = ctx.mapped_power_mean(q.t);
                 Evaluation e;
                 e.terms.push_back(power_term("phi_power", l, r, 1.0, 1.0, ctx.tol()));
                 return e;
               }});

  c.push_back({"dehghani_p", CheckStatus::Theorem, kUsesT | kUsesP,
               "P_t(Phi(A))^p <= K^p Phi(P_t(A))^p, 0 < p <= 2",
               [](const CheckParams& q) { return p_in(q.p, 0, true, 2, false, "(0, 2]"); },
               nullptr, kant_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = kant_p(ctx.constants(), q);
                 e.terms.push_back(power_term("dehghani", ctx.mapped_power_mean(q.t),
                                              ctx.phi_of_power_mean(q.t), q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"thm_p4", CheckStatus::Theorem, kUsesT | kUsesP,
               "P_t(Phi(A))^p <= ((m+M)^2/(4^{2/p} mM))^p Phi(P_t(A))^p, p >= 2",
               [](const CheckParams& q) { return p_in(q.p, 2, false, kInf, true, "[2, inf)"); },
               nullptr, c4_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = c4_p(ctx.constants(), q);
                 e.terms.push_back(power_term("power_mean_reverse", ctx.mapped_power_mean(q.t),
                                              ctx.phi_of_power_mean(q.t), q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"haj2_scalar", CheckStatus::Theorem, kUsesNone,
               "Mm Phi(A_i^-1) + Phi(A_i) <= (M+m) I", nullptr, nullptr,
               [](const Constants& c, const CheckParams&) { return c.M() + c.m(); },
               [](InstanceContext& ctx, const CheckParams&) {
                 Evaluation e;
                 const double m = ctx.constants().m();
                 const double M = ctx.constants().M();
                 e.constant = M + m;
                 const auto& tuple = ctx.tuple();
                 const auto& phi = ctx.map();
                 for (std::size_t i = 0; i < tuple.size(); ++i) {
                   const Matrix lhs =
                       M * m * phi.apply(matrix_inverse(tuple[i])) + phi.apply(tuple[i].matrix());
                   e.terms.push_back(loewner_term("A_" + std::to_string(i + 1), lhs,
                                                  (M + m) * identity(phi.out_dim()), ctx.tol()));
                 }
                 return e;
               }});

  c.push_back({"geo_reverse_p", CheckStatus::Theorem, kUsesP,
               "(Phi(A) #_a Phi(B))^p <= ((m+M)^2/(4^{2/p} mM))^p Phi(A #_a B)^p, p >= 2",
               [](const CheckParams& q) { return p_in(q.p, 2, false, kInf, true, "[2, inf)"); },
               needs_pair, c4_p, [](InstanceContext& ctx, const CheckParams& q) {
                 const auto [a, b] = first_pair(ctx);
                 const auto& phi = ctx.map();
                 const double alpha = pair_alpha(ctx);
                 const SpectralMatrix lhs(geometric_mean(phi.apply(*a), phi.apply(*b), alpha));
                 const SpectralMatrix rhs(phi.apply(geometric_mean(*a, *b, alpha)));
                 Evaluation e;
                 e.constant = c4_p(ctx.constants(), q);
                 e.terms.push_back(power_term("geo_reverse", lhs, rhs, q.p, e.constant,
                                              ctx.tol()));
                 e.notes = "alpha=" + num(alpha);
                 return e;
               }});

  c.push_back({"karcher_reverse_p", CheckStatus::Theorem, kUsesP,
               "Lambda(Phi(A))^p <= ((m+M)^2/(4^{2/p} mM))^p Phi(Lambda(A))^p, p >= 2",
               [](const CheckParams& q) { return p_in(q.p, 2, false, kInf, true, "[2, inf)"); },
               nullptr, c4_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = c4_p(ctx.constants(), q);
                 e.terms.push_back(power_term("karcher_reverse", ctx.mapped_karcher(),
                                              ctx.phi_of_karcher(), q.p, e.constant, ctx.tol()));
                 return e;
               }});

  c.push_back({"arith_below_power", CheckStatus::Theorem, kUsesT, "sum w_i A_i <= K P_t",
               nullptr, nullptr, kant, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = ctx.constants().K();
                 e.terms.push_back(power_term("arith<=K P_t", ctx.arithmetic(),
                                              ctx.power_mean(q.t), 1.0, e.constant, ctx.tol()));
                 return e;
               }});

  c.push_back({"amgm_counterpart", CheckStatus::Theorem, kUsesNone, "(A + B) / 2 <= K (A # B)",
               nullptr, needs_pair, kant, [](InstanceContext& ctx, const CheckParams&) {
                 const auto [a, b] = first_pair(ctx);
                 Evaluation e;
                 e.constant = ctx.constants().K();
                 e.terms.push_back(loewner_term("arith<=K geo", 0.5 * (a->matrix() + b->matrix()),
                                                e.constant * geometric_mean(*a, *b).matrix(),
                                                ctx.tol()));
                 return e;
               }});

  c.push_back({"arith_below_karcher", CheckStatus::Theorem, kUsesNone,
               "sum w_i A_i <= K Lambda", nullptr, nullptr, kant,
               [](InstanceContext& ctx, const CheckParams&) {
                 Evaluation e;
                 e.constant = ctx.constants().K();
                 e.terms.push_back(power_term("arith<=K Lambda", ctx.arithmetic(), ctx.karcher(),
                                              1.0, e.constant, ctx.tol()));
                 return e;
               }});

  c.push_back({"chain_13", CheckStatus::Theorem, kUsesT,
               "Phi(sum w_i A_i) <= K Phi(P_t) <= K P_t(Phi(A)); second link for t in (0, 1]",
               nullptr, nullptr, kant, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 const double k = ctx.constants().K();
                 e.constant = k;
                 const auto& phi_p = ctx.phi_of_power_mean(q.t);
                 e.terms.push_back(power_term("Phi(arith)<=K Phi(P_t)", ctx.mapped_arithmetic(),
                                              phi_p, 1.0, k, ctx.tol()));
                 if (q.t > 0.0) {
                   const auto& p_phi = ctx.mapped_power_mean(q.t);
                   e.terms.push_back(loewner_term("K Phi(P_t)<=K P_t(Phi)", k * phi_p.power(1),
                                                  k * p_phi.power(1), power_extremes(phi_p, 1, k),
                                                  power_extremes(p_phi, 1, k), ctx.tol()));
                 } else {
                   e.notes = "second link not evaluated for t < 0";
                 }
                 return e;
               }});

  c.push_back({"chain_26", CheckStatus::Theorem, kUsesT | kUsesP,
               "Phi(sum w_i A_i)^p <= K^p P_t(Phi(A))^p, t in (0, 1], 0 < p <= 1",
               [](const CheckParams& q) -> Reason {
                 if (auto r = t_positive(q.t)) return r;
                 return p_in(q.p, 0, true, 1, false, "(0, 1]");
               },
               nullptr, kant_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = kant_p(ctx.constants(), q);
                 e.terms.push_back(power_term("chain_power", ctx.mapped_arithmetic(),
                                              ctx.mapped_power_mean(q.t), q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"thm17", CheckStatus::Theorem, kUsesT | kUsesP,
               "Phi(sum w_i A_i)^p <= alpha^p Phi(P_t)^p, alpha = max{K, (M+m)^2/(4^{2/p} Mm)}, "
               "p > 1",
               [](const CheckParams& q) { return p_in(q.p, 1, true, kInf, true, "(1, inf)"); },
               nullptr, thm_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = thm_p(ctx.constants(), q);
                 e.terms.push_back(power_term("arith_reverse", ctx.mapped_arithmetic(),
                                              ctx.phi_of_power_mean(q.t), q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"thm17_27", CheckStatus::Theorem, kUsesT | kUsesP,
               "Phi(sum w_i A_i)^p <= K^p Phi(P_t)^p, 0 < p <= 2",
               [](const CheckParams& q) { return p_in(q.p, 0, true, 2, false, "(0, 2]"); },
               nullptr, kant_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = kant_p(ctx.constants(), q);
                 e.terms.push_back(power_term("arith_reverse_small_p", ctx.mapped_arithmetic(),
                                              ctx.phi_of_power_mean(q.t), q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"thm17_28", CheckStatus::Theorem, kUsesT | kUsesP,
               "Phi(sum w_i A_i)^p <= ((M+m)^2/(4^{2/p} Mm))^p Phi(P_t)^p, p > 2",
               [](const CheckParams& q) { return p_in(q.p, 2, true, kInf, true, "(2, inf)"); },
               nullptr, c4_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = c4_p(ctx.constants(), q);
                 e.terms.push_back(power_term("arith_reverse_large_p", ctx.mapped_arithmetic(),
                                              ctx.phi_of_power_mean(q.t), q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"thm17_karcher", CheckStatus::Theorem, kUsesP,
               "Phi(sum w_i A_i)^p <= alpha^p Phi(Lambda)^p, p >= 1",
               [](const CheckParams& q) { return p_in(q.p, 1, false, kInf, true, "[1, inf)"); },
               nullptr, thm_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = thm_p(ctx.constants(), q);
                 e.terms.push_back(power_term("arith_reverse_karcher", ctx.mapped_arithmetic(),
                                              ctx.phi_of_karcher(), q.p, e.constant, ctx.tol()));
                 return e;
               }});

  c.push_back({"anticomm_power", CheckStatus::Theorem, kUsesT | kUsesP,
               "X^p Phi(P_t)^-p + Phi(P_t)^-p X^p <= 2 alpha^p for X = P_t(Phi(A)) and "
               "X = Phi(sum w_i A_i), alpha = max{K, (m+M)^2/(4^{1/p} mM)}",
               nullptr, nullptr, anti_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = anti_p(ctx.constants(), q);
                 const auto& y = ctx.phi_of_power_mean(q.t);
                 e.terms.push_back(anticommutator_term("P_t(Phi)", ctx.mapped_power_mean(q.t), y,
                                                       q.p, e.constant, ctx.tol()));
                 e.terms.push_back(anticommutator_term("Phi(arith)", ctx.mapped_arithmetic(), y,
                                                       q.p, e.constant, ctx.tol()));
                 e.notes = "alpha uses 4^{1/p}, the reverse-power constant uses 4^{2/p}";
                 return e;
               }});

  c.push_back({"anticomm_karcher", CheckStatus::Theorem, kUsesP,
               "X^p Phi(Lambda)^-p + Phi(Lambda)^-p X^p <= 2 alpha^p for X = Lambda(Phi(A)) "
               "and X = Phi(sum w_i A_i)",
               nullptr, nullptr, anti_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = anti_p(ctx.constants(), q);
                 const auto& y = ctx.phi_of_karcher();
                 e.terms.push_back(anticommutator_term("Lambda(Phi)", ctx.mapped_karcher(), y,
                                                       q.p, e.constant, ctx.tol()));
                 e.terms.push_back(anticommutator_term("Phi(arith)", ctx.mapped_arithmetic(), y,
                                                       q.p, e.constant, ctx.tol()));
                 e.notes = "alpha uses 4^{1/p}, the reverse-power constant uses 4^{2/p}";
                 return e;
               }});

  c.push_back({"norm_upper_18", CheckStatus::Theorem, kUsesT | kUsesNorm,
               "|||P_t||| <= sum w_i |||A_i|||, t in (0, 1]",
               [](const CheckParams& q) { return t_positive(q.t); }, nullptr, one, [](InstanceContext& ctx, const CheckParams& q) {
                 const auto& tuple = ctx.tuple();
                 double rhs = 0.0;
                 for (std::size_t i = 0; i < tuple.size(); ++i)
                   rhs += tuple.weights()[i] * ui_norm(tuple[i], q.norm);
                 Evaluation e;
                 e.terms.push_back(scalar_term(q.norm.name(),
                                               ui_norm(ctx.power_mean(q.t).matrix, q.norm), rhs,
                                               ctx.tol()));
                 return e;
               }});

  c.push_back({"norm_lower_18", CheckStatus::Theorem, kUsesT | kUsesNorm,
               "|||P_{-t}||| >= (sum w_i |||A_i^-1|||)^-1, t in (0, 1]",
               [](const CheckParams& q) { return t_positive(q.t); }, nullptr, one,
               [](InstanceContext& ctx, const CheckParams& q) {
                 const auto& tuple = ctx.tuple();
                 double sum = 0.0;
                 for (std::size_t i = 0; i < tuple.size(); ++i)
                   sum += tuple.weights()[i] * ui_norm(matrix_inverse(tuple[i]), q.norm);
                 Evaluation e;
                 e.terms.push_back(scalar_term(q.norm.name(), 1.0 / sum,
                                               ui_norm(ctx.power_mean(-q.t).matrix, q.norm),
                                               ctx.tol()));
                 return e;
               }});

  c.push_back({"refine23", CheckStatus::Theorem, kUsesT | kUsesP,
               "Phi(sum w_i A_i)^{2p} <= (K(M^2+m^2))^{2p}/(16 M^{2p} m^{2p}) Phi(P_t)^{2p}, "
               "p >= 2",
               [](const CheckParams& q) { return p_in(q.p, 2, false, kInf, true, "[2, inf)"); },
               nullptr, c23, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = ctx.constants().c23(q.p);
                 e.terms.push_back(power_term("refined_arith", ctx.mapped_arithmetic(),
                                              ctx.phi_of_power_mean(q.t), 2.0 * q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"refine34", CheckStatus::Theorem, kUsesT | kUsesP,
               "P_t(Phi(A))^{2p} <= (K(M^2+m^2))^{2p}/(16 M^{2p} m^{2p}) Phi(P_t)^{2p}, p >= 2",
               [](const CheckParams& q) { return p_in(q.p, 2, false, kInf, true, "[2, inf)"); },
               nullptr, c23, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = ctx.constants().c23(q.p);
                 e.terms.push_back(power_term("refined_power_mean", ctx.mapped_power_mean(q.t),
                                              ctx.phi_of_power_mean(q.t), 2.0 * q.p, e.constant,
                                              ctx.tol()));
                 return e;
               }});

  c.push_back({"lemma6_suite", CheckStatus::Theorem, kUsesAlpha,
               "(i) ||AB|| <= ||A+B||^2/4; (ii) ||A^a+B^a|| <= ||(A+B)^a||, a >= 1; "
               "(iii) A <= aB iff ||A^{1/2}B^{-1/2}|| <= a^{1/2}; "
               "(iv) A <= B, m <= A <= M implies A^2 <= K B^2",
               nullptr, nullptr, one, [](InstanceContext& ctx, const CheckParams& q) {
                 const auto& tuple = ctx.tuple();
                 const HpdMatrix& a = tuple[0];
                 const HpdMatrix& b = tuple[tuple.size() > 1 ? 1 : 0];
                 const double tol = ctx.tol();
                 Evaluation e;

                 const double lhs_i = operator_norm(a.matrix() * b.matrix());
                 const double sum_norm = operator_norm(a.matrix() + b.matrix());
                 e.terms.push_back(scalar_term("(i)", lhs_i, 0.25 * sum_norm * sum_norm, tol));

                 const double alpha = q.alpha_lemma;
                 if (alpha >= 1.0) {
                   const double lhs_ii = operator_norm(matrix_power(a, alpha) + matrix_power(b, alpha));
                   const double rhs_ii = operator_norm(matrix_power(a.matrix() + b.matrix(), alpha));
                   e.terms.push_back(scalar_term("(ii)", lhs_ii, rhs_ii, tol));
                 } else {
                   e.notes = "(ii) omitted: the norm inequality needs alpha >= 1";
                 }

                 // (iii) at the given alpha and just either side of the critical value.
                 const Matrix a_half = matrix_sqrt(a);
                 const Matrix b_inv_half = matrix_power(b, -0.5);
                 const double gauge = operator_norm(a_half * b_inv_half);
                 const double critical = gauge * gauge;
                 for (double s : {alpha, critical * (1.0 - 1e-6), critical * (1.0 + 1e-6)}) {
                   const LoewnerResult order = loewner_slack(a, s * b.matrix(), tol);
                   const Margin by_order{order.slack, order.scale};
                   const Margin by_norm{std::sqrt(s) - gauge, 1.0 + std::sqrt(s) + gauge};
                   e.terms.push_back(
                       consistency_term("(iii) a=" + num(s), {by_order, by_norm}, tol));
                 }

                 // (iv) with B = A + (C - lambda_min(C) I), C the last matrix of the tuple.
                 const HpdMatrix& c = tuple[tuple.size() - 1];
                 const double c_min = spectral_bounds(c).m;
                 const Matrix bigger = a.matrix() + c.matrix() - c_min * identity(a.dim());
                 const double k = ctx.constants().K();
                 e.terms.push_back(loewner_term("(iv)", a.matrix() * a.matrix(),
                                                k * hermitize(bigger * bigger), tol));
                 return e;
               }});

  c.push_back({"lemma19_suite", CheckStatus::Theorem, kUsesNone,
               "A <= sI iff ||A|| <= s iff [[sI, A], [A^*, sI]] >= 0", nullptr, nullptr, one,
               [](InstanceContext& ctx, const CheckParams&) {
                 const HpdMatrix& a = ctx.tuple()[0];
                 const int n = a.dim();
                 const double norm = operator_norm(a);
                 const double m = ctx.constants().m();
                 const double M = ctx.constants().M();
                 Evaluation e;
                 for (double s : {norm * (1.0 + 1e-6), norm * (1.0 - 1e-6), 0.5 * (m + M)}) {
                   const LoewnerResult order = loewner_slack(a, s * identity(n), ctx.tol());
                   Matrix block(2 * n, 2 * n);
                   block << s * identity(n), a.matrix(), a.matrix().adjoint(), s * identity(n);
                   const double block_min = eigvalsh(block)(0);
                   e.terms.push_back(consistency_term(
                       "s=" + num(s),
                       {{order.slack, order.scale},
                        {s - norm, 1.0 + s + norm},
                        {block_min, 1.0 + 2.0 * (s + norm)}},
                       ctx.tol()));
                 }
                 return e;
               }});

  c.push_back({"ledger_fact_p30", CheckStatus::Probe, kUsesT,
               "d_T(P_t(1-a, a; A, B), A #_a B) with a = w_2 / (w_1 + w_2); not expected to vanish",
               nullptr, needs_pair, one, [](InstanceContext& ctx, const CheckParams& q) {
                 const auto [a, b] = first_pair(ctx);
                 const double alpha = pair_alpha(ctx);
                 const MatrixTuple pair({*a, *b}, WeightVector({1.0 - alpha, alpha}),
                                        ctx.tuple().bounds());
                 const SpectralMatrix pt(power_mean(pair, q.t, ctx.solver_options()).mean);
                 const SpectralMatrix geo(geometric_mean(*a, *b, alpha));
                 const double distance = thompson_distance(pt.eig, geo.matrix.matrix());
                 Term term;
                 term.label = "thompson";
                 term.slack = -distance;
                 term.scale = 1.0;
                 term.holds = distance <= ctx.tol();
                 term.lhs = power_extremes(pt, 1);
                 term.rhs = power_extremes(geo, 1);
                 Evaluation e;
                 e.terms.push_back(term);
                 e.notes = "alpha=" + num(alpha) + " distance=" + num(distance) + " P_t in [" +
                           num(pt.min()) + ", " + num(pt.max()) + "] vs geo in [" +
                           num(geo.min()) + ", " + num(geo.max()) + "]";
                 return e;
               }});

  c.push_back({"anticomm_printed", CheckStatus::Probe, kUsesT | kUsesP,
               "P_t(A)^p Phi(P_t)^-p + Phi(P_t)^-p P_t(A)^p <= 2 alpha^p (unmapped P_t)",
               nullptr,
               [](const InstanceContext& ctx) -> Reason {
                 if (ctx.map().in_dim() != ctx.map().out_dim())
                   return std::string("needs a dimension-preserving map");
                 return std::nullopt;
               },
               anti_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = anti_p(ctx.constants(), q);
                 e.terms.push_back(anticommutator_term("P_t(A)", ctx.power_mean(q.t),
                                                       ctx.phi_of_power_mean(q.t), q.p,
                                                       e.constant, ctx.tol()));
                 return e;
               }});

  c.push_back({"anticomm_karcher_printed", CheckStatus::Probe, kUsesP,
               "Lambda(A)^p Phi(Lambda)^-p + Phi(Lambda)^-p Lambda(A)^p <= 2 alpha^p "
               "(unmapped Lambda)",
               nullptr,
               [](const InstanceContext& ctx) -> Reason {
                 if (ctx.map().in_dim() != ctx.map().out_dim())
                   return std::string("needs a dimension-preserving map");
                 return std::nullopt;
               },
               anti_p, [](InstanceContext& ctx, const CheckParams& q) {
                 Evaluation e;
                 e.constant = anti_p(ctx.constants(), q);
                 e.terms.push_back(anticommutator_term("Lambda(A)", ctx.karcher(),
                                                       ctx.phi_of_karcher(), q.p, e.constant,
                                                       ctx.tol()));
                 return e;
               }});

  return c;
}

}  // namespace

const std::vector<CheckDefinition>& catalog() {
  static const std::vector<CheckDefinition> entries = build_catalog();
  return entries;
}

const CheckDefinition& find_check(const std::string& id) {
  for (const auto& check : catalog())
    if (check.id == id) return check;
  throw Error(ErrorCode::UnknownCheck, "no check named '" + id + "'");
}

std::vector<std::string> theorem_check_ids() {
  std::vector<std::string> ids;
  for (const auto& check : catalog())
    if (check.status == CheckStatus::Theorem) ids.push_back(check.id);
  return ids;
}

}  // namespace meanforge
