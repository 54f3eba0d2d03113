#include <algorithm>
#include <chrono>
#include <cmath>

#include "nhcz/verify.hpp"

namespace nhcz {

namespace {

constexpr double fit_tolerance = 1e-9;

CheckReport make_report(const VerifyContext& ctx, std::string check) {
  CheckReport r;
  r.check = std::move(check);
  r.instance = ctx.instance;
  r.atoms = ctx.mu.size();
  r.seed = ctx.seed;
  r.kernel = ctx.kernel.name();
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_disjoint(const DiscreteMeasure& nu, const DiscreteMeasure& mu) {
  for (Index j = 0; j < nu.size(); ++j)
    if (mu.find(nu.point(j)) >= 0) throw Error("singular evaluation");
}

/// Weak-type statistic shared by T and T#: max_t t mu{field > t} / ||nu||.
CheckReport weak_type_report(const VerifyContext& ctx, const DiscreteMeasure& nu,
                             const RealField& field, std::vector<double> t_grid,
                             std::string check) {
  CheckReport rep = make_report(ctx, std::move(check));
  rep.statistic_kind = "max_t t mu{|.| > t} / ||nu||";
  const double norm = total_variation(nu);
  if (t_grid.empty()) t_grid = default_t_grid(field);
  rep.trials = static_cast<Index>(t_grid.size());
  if (norm > 0.0) {
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      const double t = t_grid[k];
      const double value = t * distribution_function(field, ctx.mu, t) / norm;
      if (rep.witness.trial < 0 || value > rep.statistic) {
        rep.statistic = value;
        rep.witness = Witness{static_cast<Index>(k), -1, Point{}, t, value};
      }
    }
    rep.metrics = {{"exact_sup", weak_l1_norm(field, ctx.mu) / norm}};
  } else {
    rep.metrics = {{"exact_sup", 0.0}};
  }
  if (ctx.opnorm) {
    rep.has_bound = true;
    rep.bound_formula = "(1 + A3) (3 + 2 (A1 + S C0)), A3 = A2 + 2 S C0 + 100 ||T||; times 2 sqrt 2 for complex K";
    rep.bound = ctx.assembled_weak_constant();
    rep.passed = rep.statistic <= rep.bound;
    if (!rep.passed) rep.violations = 1;
  } else {
    rep.passed = true;
  }
  return rep;
}

void attach_fit(CheckReport& rep, const ConstantFit& fit, const std::string& prefix) {
  rep.metrics.emplace_back(prefix + "A", fit.A);
  rep.metrics.emplace_back(prefix + "B", fit.B);
  rep.metrics.emplace_back(prefix + "residual", fit.residual);
  rep.metrics.emplace_back(prefix + "sentinels", static_cast<double>(fit.sentinel_count));
}

bool fit_ok(const ConstantFit& fit) { return fit.residual <= fit_tolerance && !fit.flagged; }

/// Witness: the point whose lhs - A term1 - B term2 is largest.
Witness tightest_point(const RealField& lhs, const RealField& t1, const RealField& t2,
                       const ConstantFit& fit, const std::vector<Point>& points) {
  Witness w;
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < lhs.size(); ++i) {
    if (!std::isfinite(lhs[i]) || !std::isfinite(t1[i]) || !std::isfinite(t2[i])) continue;
    const double slack = lhs[i] - fit.A * t1[i] - fit.B * t2[i];
    if (slack > best) {
      best = slack;
      w = Witness{0, i, points[static_cast<std::size_t>(i)], 0.0, lhs[i]};
    }
  }
  return w;
}

}  // namespace

CheckReport check_weak_type_T(const VerifyContext& ctx, const DiscreteMeasure& nu,
                              std::vector<double> t_grid) {
  const auto start = std::chrono::steady_clock::now();
  require_disjoint(nu, ctx.mu);
  const RealField field =
      transform_field(ctx.kernel, nu, RealField::Ones(nu.size()), ctx.mu.points(), ctx.jobs)
          .cwiseAbs();
  CheckReport rep = weak_type_report(ctx, nu, field, std::move(t_grid), "weak-T");
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_weak_type_Tsharp(const VerifyContext& ctx, const DiscreteMeasure& nu,
                                   std::vector<double> t_grid) {
  const auto start = std::chrono::steady_clock::now();
  require_disjoint(nu, ctx.mu);
  const RealField field =
      tsharp_field(ctx.kernel, nu, RealField::Ones(nu.size()), ctx.mu.points(), ctx.jobs);
  CheckReport rep = weak_type_report(ctx, nu, field, std::move(t_grid), "weak-Tsharp");
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

FitReport check_theorem2(const VerifyContext& ctx, const RealField& phi, double beta,
                         const std::vector<Point>& points) {
  const auto start = std::chrono::steady_clock::now();
  if (!(beta > 1.0)) throw Error("check_theorem2: beta must exceed 1");
  if (phi.size() != ctx.mu.size()) throw Error("check_theorem2: field size mismatch");
  const DiscreteMeasure& mu = ctx.mu;
  const RealField abs_phi = phi.cwiseAbs();
  const RealField abs_t = transform_field(ctx.kernel, mu, phi, mu.points(), ctx.jobs).cwiseAbs();

  const Index n = static_cast<Index>(points.size());
  RealField lhs(n), t1(n), t2(n);
  parallel_for(n, ctx.jobs, [&](Index i) {
    const CenterIndex idx(mu, points[static_cast<std::size_t>(i)]);
    lhs[i] = apply_Tsharp(ctx.kernel, mu, idx, phi) - restricted_maximal(idx, abs_t, 1.0).value;
    t1[i] = restricted_maximal(idx, abs_phi, beta).value;
    t2[i] = radial_maximal(idx, abs_phi, beta);
  });

  FitReport out;
  out.report = make_report(ctx, "theorem2");
  CheckReport& rep = out.report;
  rep.trials = n;
  out.fit = fit_constants(lhs, t1, t2);
  out.points = points;
  out.lhs = lhs;
  out.term1 = t1;
  out.term2 = t2;
  if (n > 0 && out.fit.sentinel_count == n) throw Error("check_theorem2: every point is a sentinel");
  rep.skipped = out.fit.sentinel_count;
  rep.statistic_kind = "fitted B + B'";
  rep.statistic = out.fit.A + out.fit.B;
  rep.witness = tightest_point(lhs, t1, t2, out.fit, points);
  attach_fit(rep, out.fit, "");
  rep.metrics.emplace_back("beta", beta);
  rep.passed = fit_ok(out.fit);
  if (!rep.passed) rep.violations = 1;
  rep.runtime_seconds = seconds_since(start);
  return out;
}

CheckReport check_star(const VerifyContext& ctx, const CZDecomposition& dec,
                       const std::vector<Point>& points) {
  const auto start = std::chrono::steady_clock::now();
  const DiscreteMeasure& mu = ctx.mu;
  CheckReport rep = make_report(ctx, "star");
  rep.statistic_kind = "fitted A5 in sigma# <= M~sigma + A5 + (2/t) m";

  std::vector<Point> outside;
  for (const Point& p : points) {
    const Index a = mu.find(p);
    if (a >= 0 && dec.in_union(a)) {
      ++rep.skipped;
      continue;
    }
    outside.push_back(p);
  }
  const Index n = static_cast<Index>(outside.size());
  rep.trials = n;

  double l2_constant = 0.0;
  RealField excess = RealField::Zero(n);
  if (!dec.disks.empty()) {
    const RealField abs_sigma = sigma_values(dec, ctx.kernel, mu, ctx.jobs).cwiseAbs();
    const RealField m = mass_function(dec, outside);
    parallel_for(n, ctx.jobs, [&](Index i) {
      const Point x = outside[static_cast<std::size_t>(i)];
      const double tilde = restricted_maximal(CenterIndex(mu, x), abs_sigma, 1.0).value;
      excess[i] = sigma_sharp(dec, ctx.kernel, mu, x) - tilde - 2.0 / dec.t * m[i];
    });
    double s = 0.0;
    for (Index i = 0; i < mu.size(); ++i) s += abs_sigma[i] * abs_sigma[i] * mu.weight(i);
    if (dec.nu_norm > 0.0) l2_constant = dec.t * s / dec.nu_norm;
  }
  const ConstantFit fit = fit_constants(excess, RealField::Ones(n), RealField::Zero(n));
  rep.statistic = fit.A;
  for (Index i = 0; i < n; ++i)
    if (rep.witness.trial < 0 || excess[i] > rep.witness.value)
      rep.witness = Witness{0, i, outside[static_cast<std::size_t>(i)], dec.t, excess[i]};
  rep.metrics = {{"A5", fit.A}, {"l2_constant", l2_constant}, {"t", dec.t},
                 {"disks", static_cast<double>(dec.disks.size())}};
  rep.passed = fit_ok(fit);
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

FitReport check_cotlar(const VerifyContext& ctx, const RealField& phi, double p,
                       const std::vector<Point>& points, bool restricted) {
  const auto start = std::chrono::steady_clock::now();
  if (!(p > 0.0 && p < 1.0)) throw Error("check_cotlar: p must lie in (0, 1)");
  if (phi.size() != ctx.mu.size()) throw Error("check_cotlar: field size mismatch");
  const DiscreteMeasure& mu = ctx.mu;
  const RealField abs_phi = phi.cwiseAbs();
  const RealField abs_t = transform_field(ctx.kernel, mu, phi, mu.points(), ctx.jobs).cwiseAbs();
  const RealField abs_t_p = abs_t.array().pow(p).matrix();

  const Index n = static_cast<Index>(points.size());
  RealField lhs(n), power_term(n), plain_term(n), phi_term(n);
  parallel_for(n, ctx.jobs, [&](Index i) {
    const CenterIndex idx(mu, points[static_cast<std::size_t>(i)]);
    const std::vector<Index> counts = restricted ? doubling_counts(idx) : event_counts(idx);
    lhs[i] = apply_Tsharp(ctx.kernel, mu, idx, phi);
    power_term[i] = std::pow(ball_average_max(idx, counts, abs_t_p), 1.0 / p);
    plain_term[i] = ball_average_max(idx, counts, abs_t);
    phi_term[i] = hl_maximal(idx, abs_phi);
  });

  FitReport out;
  out.report = make_report(ctx, restricted ? "cotlar-restricted" : "cotlar");
  CheckReport& rep = out.report;
  rep.trials = n;
  out.fit = fit_constants(lhs, power_term, phi_term);
  out.second = fit_constants(lhs, plain_term, phi_term);
  out.points = points;
  out.lhs = lhs;
  out.term1 = power_term;
  out.term2 = phi_term;
  rep.skipped = out.fit.sentinel_count;
  rep.statistic_kind = "fitted A_p + B_p";
  rep.statistic = out.fit.A + out.fit.B;
  rep.witness = tightest_point(lhs, power_term, phi_term, out.fit, points);
  attach_fit(rep, out.fit, "");
  attach_fit(rep, *out.second, "linear_");
  rep.metrics.emplace_back("p", p);
  rep.passed = fit_ok(out.fit) && fit_ok(*out.second);
  if (!rep.passed) rep.violations = 1;
  rep.runtime_seconds = seconds_since(start);
  return out;
}

}  // namespace nhcz
