#include "meanforge/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace meanforge {

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Skip: return "skip";
  }
  return "?";
}

std::string to_string(CheckStatus status) {
  return status == CheckStatus::Theorem ? "theorem" : "probe";
}

Constants::Constants(double m, double M) : m_(m), M_(M) {
  if (!(m > 0.0) || !(m <= M) || !std::isfinite(M)) {
    throw Error(ErrorCode::ParamOutOfDomain, "constants need 0 < m <= M");
  }
}

double Constants::K() const { return (M_ + m_) * (M_ + m_) / (4.0 * m_ * M_); }

double Constants::c4(double p) const {
  return (M_ + m_) * (M_ + m_) / (std::pow(4.0, 2.0 / p) * m_ * M_);
}

double Constants::alpha_thm(double p) const { return std::max(K(), c4(p)); }

double Constants::alpha_anticomm(double p) const {
  return std::max(K(), (M_ + m_) * (M_ + m_) / (std::pow(4.0, 1.0 / p) * m_ * M_));
}

double Constants::c23(double p) const {
  return std::pow(K() * (M_ * M_ + m_ * m_), 2.0 * p) /
         (16.0 * std::pow(M_, 2.0 * p) * std::pow(m_, 2.0 * p));
}

double Constants::c31(double p) const {
  return std::pow((M_ + m_) / (2.0 * std::sqrt(M_ * m_)), p);
}

double constant_of(const std::string& id, double m, double M, double p) {
  const Constants c(m, M);
  const bool named = id == "K" || id == "alpha_thm" || id == "alpha_anticomm" || id == "c4" ||
                     id == "c23" || id == "c31";
  if (named) {
    if (id == "K") return c.K();
    if (!(p > 0.0)) throw Error(ErrorCode::ParamOutOfDomain, "p must be positive");
    if (id == "alpha_thm") return c.alpha_thm(p);
    if (id == "alpha_anticomm") return c.alpha_anticomm(p);
    if (id == "c4") return c.c4(p);
    if (id == "c23") return c.c23(p);
    return c.c31(p);
  }
  const CheckDefinition& check = find_check(id);
  CheckParams params;
  params.p = p;
  if (check.uses & kUsesP) {
    if (!(p > 0.0)) throw Error(ErrorCode::ParamOutOfDomain, "p must be positive");
    if (auto reason = check.param_domain ? check.param_domain(params) : std::nullopt) {
      throw Error(ErrorCode::ParamOutOfDomain, id + ": " + *reason);
    }
  }
  return check.constant(c, params);
}

SpectralMatrix::SpectralMatrix(HpdMatrix m) : matrix(std::move(m)), eig(eigh(matrix.matrix())) {}

Matrix SpectralMatrix::power(double p) const {
  if (p == 1.0) return matrix.matrix();
  return eig.apply([p](double x) { return std::pow(x, p); });
}

InstanceContext::InstanceContext(MatrixTuple tuple, UcpMap map, SolverOptions options,
                                 double tol_rel)
    : tuple_(std::move(tuple)),
      map_(std::move(map)),
      options_(options),
      tol_(tol_rel),
      constants_(tuple_.bounds().m, tuple_.bounds().M) {
  if (map_.in_dim() != tuple_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "map input dimension " +
                                                  std::to_string(map_.in_dim()) +
                                                  " != tuple dimension " +
                                                  std::to_string(tuple_.dim()));
  }
}

const MatrixTuple& InstanceContext::mapped_tuple() {
  if (!mapped_) mapped_.emplace(map_tuple(map_, tuple_));
  return *mapped_;
}

const SpectralMatrix& InstanceContext::arithmetic() {
  if (!arith_) arith_.emplace(arithmetic_mean(tuple_));
  return *arith_;
}

const SpectralMatrix& InstanceContext::harmonic() {
  if (!harm_) harm_.emplace(harmonic_mean(tuple_));
  return *harm_;
}

const SpectralMatrix& InstanceContext::mapped_arithmetic() {
  if (!mapped_arith_) mapped_arith_.emplace(map_.apply(arithmetic().matrix));
  return *mapped_arith_;
}

namespace {

std::string t_label(const char* what, double t) {
  std::ostringstream out;
  out << what << "(t=" << t << ")";
  return out.str();
}

}  // namespace

const SpectralMatrix& InstanceContext::power_mean(double t) {
  auto it = power_.find(t);
  if (it == power_.end()) {
    MeanResult r = ::meanforge::power_mean(tuple_, t, options_);
    reports_.emplace_back(t_label("P", t), r.report);
    it = power_.emplace(t, SpectralMatrix(std::move(r.mean))).first;
  }
  return it->second;
}

const SpectralMatrix& InstanceContext::mapped_power_mean(double t) {
  auto it = mapped_power_.find(t);
  if (it == mapped_power_.end()) {
    MeanResult r = ::meanforge::power_mean(mapped_tuple(), t, options_);
    reports_.emplace_back(t_label("P_phi", t), r.report);
    it = mapped_power_.emplace(t, SpectralMatrix(std::move(r.mean))).first;
  }
  return it->second;
}

const SpectralMatrix& InstanceContext::phi_of_power_mean(double t) {
  auto it = phi_power_.find(t);
  if (it == phi_power_.end()) {
    HpdMatrix mapped = map_.apply(power_mean(t).matrix);
    it = phi_power_.emplace(t, SpectralMatrix(std::move(mapped))).first;
  }
  return it->second;
}

const SpectralMatrix& InstanceContext::karcher() {
  if (!karcher_) {
    MeanResult r = karcher_mean(tuple_, options_);
    reports_.emplace_back("Lambda", r.report);
    karcher_.emplace(std::move(r.mean));
  }
  return *karcher_;
}

const SpectralMatrix& InstanceContext::mapped_karcher() {
  if (!mapped_karcher_) {
    MeanResult r = karcher_mean(mapped_tuple(), options_);
    reports_.emplace_back("Lambda_phi", r.report);
    mapped_karcher_.emplace(std::move(r.mean));
  }
  return *mapped_karcher_;
}

const SpectralMatrix& InstanceContext::phi_of_karcher() {
  if (!phi_karcher_) phi_karcher_.emplace(map_.apply(karcher().matrix));
  return *phi_karcher_;
}

namespace {

std::optional<std::string> common_domain(const CheckDefinition& check, const CheckParams& q) {
  if ((check.uses & kUsesT) && (!(q.t >= -1.0 && q.t <= 1.0) || q.t == 0.0)) {
    return "t outside [-1, 1] \\ {0}";
  }
  if ((check.uses & kUsesP) && !(q.p > 0.0)) return "p must be positive";
  if ((check.uses & kUsesAlpha) && !(q.alpha_lemma > 0.0)) return "alpha must be positive";
  return std::nullopt;
}

CheckParams project(const CheckParams& q, unsigned uses) {
  CheckParams out{0.0, 0.0, 0.0, NormKind::spectral()};
  if (uses & kUsesT) out.t = q.t;
  if (uses & kUsesP) out.p = q.p;
  if (uses & kUsesAlpha) out.alpha_lemma = q.alpha_lemma;
  if (uses & kUsesNorm) out.norm = q.norm;
  return out;
}

Verdict skeleton(const CheckDefinition& check, const CheckParams& params) {
  Verdict v;
  v.check_id = check.id;
  v.status = check.status;
  v.params_used = params;
  v.uses = check.uses;
  return v;
}

std::optional<std::string> domain_reason(const CheckDefinition& check, const CheckParams& params,
                                         const InstanceContext& ctx) {
  if (auto r = common_domain(check, params)) return r;
  if (check.param_domain)
    if (auto r = check.param_domain(params)) return r;
  if (check.instance_domain)
    if (auto r = check.instance_domain(ctx)) return r;
  return std::nullopt;
}

std::string format_slack(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Verdict finish(const CheckDefinition& check, const CheckParams& params, Evaluation eval) {
  Verdict v = skeleton(check, params);
  v.constant_value = eval.constant;
  if (eval.terms.empty()) throw Error(ErrorCode::BadParameter, check.id + " produced no terms");
  const Term* worst = &eval.terms.front();
  bool all_hold = true;
  std::string notes;
  for (const Term& term : eval.terms) {
    all_hold = all_hold && term.holds;
    if (term.relative_slack() < worst->relative_slack()) worst = &term;
    if (!notes.empty()) notes += "; ";
    notes += term.label + " rel_slack=" + format_slack(term.relative_slack());
  }
  if (!eval.notes.empty()) notes += " | " + eval.notes;
  v.holds = all_hold;
  v.outcome = all_hold ? Outcome::Pass : Outcome::Fail;
  v.slack = worst->slack;
  v.relative_slack = worst->relative_slack();
  v.lhs_extremes = worst->lhs;
  v.rhs_extremes = worst->rhs;
  v.notes = std::move(notes);
  return v;
}

}  // namespace

Verdict evaluate_check(const CheckDefinition& check, InstanceContext& ctx,
                       const CheckParams& params) {
  const CheckParams projected = project(params, check.uses);
  if (auto reason = domain_reason(check, projected, ctx)) {
    throw Error(ErrorCode::ParamOutOfDomain, check.id + ": " + *reason);
  }
  return finish(check, projected, check.evaluate(ctx, projected));
}

Verdict evaluate_check(const std::string& id, const MatrixTuple& tuple, const UcpMap& map,
                       const CheckParams& params, const RunOptions& options) {
  InstanceContext ctx(tuple, map, options.solver, options.tol_rel);
  return evaluate_check(find_check(id), ctx, params);
}

std::vector<Verdict> run_catalog(InstanceContext& ctx, const std::vector<CheckParams>& grid,
                                 const RunOptions& options) {
  std::vector<Verdict> out;
  for (const CheckDefinition& check : catalog()) {
    if (!options.ids.empty() &&
        std::find(options.ids.begin(), options.ids.end(), check.id) == options.ids.end()) {
      continue;
    }
    std::vector<CheckParams> seen;
    for (const CheckParams& point : grid) {
      const CheckParams projected = project(point, check.uses);
      if (std::find(seen.begin(), seen.end(), projected) != seen.end()) continue;
      seen.push_back(projected);

      if (auto reason = domain_reason(check, projected, ctx)) {
        Verdict v = skeleton(check, projected);
        v.notes = "skipped: " + *reason;
        out.push_back(std::move(v));
        continue;
      }
      try {
        out.push_back(finish(check, projected, check.evaluate(ctx, projected)));
      } catch (const Error& e) {
        Verdict v = skeleton(check, projected);
        v.notes = std::string("skipped: ") + e.what();
        v.solver_failure = e.code() == ErrorCode::NoConvergence;
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

std::vector<Verdict> run_catalog(const MatrixTuple& tuple, const UcpMap& map,
                                 const std::vector<CheckParams>& grid, const RunOptions& options) {
  InstanceContext ctx(tuple, map, options.solver, options.tol_rel);
  return run_catalog(ctx, grid, options);
}

}  // namespace meanforge
