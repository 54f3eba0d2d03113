#include <algorithm>
#include <chrono>
#include <cmath>

#include "nhcz/verify.hpp"

namespace nhcz {

namespace {

enum Stream : std::uint64_t {
  stream_obvious = 1,
  stream_trunc = 2,
  stream_key = 3,
  stream_sublemma = 4,
  stream_maximal = 5,
};

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

/// Nearest and farthest positive distances from x to the atoms.
std::pair<double, double> distance_range(const DiscreteMeasure& mu, Point x) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    const double d = distance(x, mu.point(i));
    if (d > 0.0) lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(std::max(lo, hi))));
}

Point uniform_in_disk(Rng& rng, Point c, double rho) {
  const double r = rho * std::sqrt(uniform01(rng));
  const double a = uniform(rng, 0.0, 2.0 * M_PI);
  return c + std::polar(r, a);
}

// ---- obvious lemma ----

struct ObviousTrial {
  bool skipped = true;
  Point x{};
  double rho = 0.0;
  double lhs = 0.0;
  /// Generalized form: lhs_phi and A4 M'phi(x).
  double lhs_phi = 0.0;
  double rhs_phi = 0.0;
};

ObviousTrial obvious_trial(const VerifyContext& ctx, Index trial) {
  const DiscreteMeasure& mu = ctx.mu;
  Rng rng = trial_rng(ctx.seed, stream_obvious, static_cast<std::uint64_t>(trial));
  ObviousTrial out;
  const Index center = uniform_index(rng, mu.size());
  out.x = mu.point(center);
  const auto [d1, dmax] = distance_range(mu, out.x);
  out.rho = log_uniform(rng, d1 / 4.0, dmax / 2.0);
  const Point a = uniform_in_disk(rng, out.x, out.rho);
  const Point b = uniform_in_disk(rng, out.x, out.rho);

  RealField phi(mu.size());
  for (Index i = 0; i < mu.size(); ++i) phi[i] = uniform01(rng);
  phi[center] = 0.0;

  // eta = delta_a - delta_b, so ||eta|| = 2.
  double plain = 0.0, weighted = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    const Point y = mu.point(i);
    if (distance(y, out.x) < 2.0 * out.rho) continue;
    out.skipped = false;
    const double diff = std::abs(kernel_value(ctx.kernel, y, a) - kernel_value(ctx.kernel, y, b));
    plain += diff * mu.weight(i);
    weighted += diff * phi[i] * mu.weight(i);
  }
  out.lhs = plain / 2.0;
  out.lhs_phi = weighted / 2.0;
  const double a4 = ctx.kernel.holder_const * (1.0 + 1.0 / ctx.kernel.eps);
  out.rhs_phi = a4 * radial_maximal(CenterIndex(mu, out.x), phi, 1.0);
  return out;
}

// ---- truncation by 81 ----

struct TruncTrial {
  Point x{};
  double r = 0.0;
  double R = 0.0;
  double diff = 0.0;
  bool minimal = true;
  bool two_step_ok = true;
};

double direct_mass(const DiscreteMeasure& mu, Point x, double r) {
  double s = 0.0;
  for (Index i = 0; i < mu.size(); ++i)
    if (distance(x, mu.point(i)) <= r) s += mu.weight(i);
  return s;
}

TruncTrial trunc_trial(const VerifyContext& ctx, Index trial) {
  const DiscreteMeasure& mu = ctx.mu;
  Rng rng = trial_rng(ctx.seed, stream_trunc, static_cast<std::uint64_t>(trial));
  TruncTrial out;
  out.x = mu.point(uniform_index(rng, mu.size()));
  const CenterIndex idx(mu, out.x);
  const double d1 = idx.distance(1), dmax = idx.distance(idx.size() - 1);
  out.r = log_uniform(rng, d1 / 2.0, dmax);
  const RealField chi = random_set(mu, rng);

  const DoublingStop stop = doubling_stop(idx, out.r, false);
  out.R = stop.R;
  // Minimality of k by a direct scan of the masses at 3^j r.
  std::vector<double> scan;
  for (int j = 0; j <= stop.k; ++j)
    scan.push_back(direct_mass(mu, out.x, stop.radii[static_cast<std::size_t>(j)]));
  for (int j = 1; j < stop.k; ++j)
    if (scan[static_cast<std::size_t>(j)] <= 9.0 * scan[static_cast<std::size_t>(j - 1)])
      out.minimal = false;
  const auto uk = static_cast<std::size_t>(stop.k);
  if (!(scan[uk] <= 9.0 * scan[uk - 1])) out.minimal = false;

  const DoublingStop two = doubling_stop(idx, out.r, true);
  const auto r2 = [&](int j) { return two.radii[static_cast<std::size_t>(j)]; };
  out.two_step_ok = direct_mass(mu, out.x, r2(two.k + 1)) <=
                    good_disk_ratio * direct_mass(mu, out.x, r2(two.k - 1));

  out.diff = std::abs(apply_Tr(ctx.kernel, mu, idx, chi, out.r) -
                      apply_Tr(ctx.kernel, mu, idx, chi, 3.0 * out.R));
  return out;
}

// ---- key lemma ----

struct KeyLemmaSet {
  RealField excess;
  RealField tsharp;
  RealField maximal;
};

KeyLemmaSet key_lemma_set(const VerifyContext& ctx, Index set) {
  const DiscreteMeasure& mu = ctx.mu;
  Rng rng = trial_rng(ctx.seed, stream_key, static_cast<std::uint64_t>(set));
  const RealField chi = random_set(mu, rng);
  const Index n = mu.size();
  RealField abs_t(n);
  KeyLemmaSet out{RealField(n), RealField(n), RealField(n)};
  parallel_for(n, ctx.jobs, [&](Index i) {
    const CenterIndex idx(mu, mu.point(i));
    const ComplexField terms = kernel_terms(ctx.kernel, mu, idx, chi);
    double best = 0.0;
    for (const KernelValue& v : truncation_profile(idx, terms)) best = std::max(best, std::abs(v));
    out.tsharp[i] = best;
    abs_t[i] = std::abs(terms.sum());
  });
  parallel_for(n, ctx.jobs, [&](Index i) {
    out.maximal[i] = hl_maximal(CenterIndex(mu, mu.point(i)), abs_t);
  });
  out.excess = out.tsharp - out.maximal;
  return out;
}

// ---- sublemma ----

struct SublemmaTrial {
  double ratio = 0.0;
  double p = 0.0;
};

SublemmaTrial sublemma_trial(const VerifyContext& ctx, Index trial, double p, Index p_index) {
  const DiscreteMeasure& mu = ctx.mu;
  Rng rng = trial_rng(ctx.seed, stream_sublemma,
                      static_cast<std::uint64_t>(trial) * 16 + static_cast<std::uint64_t>(p_index));
  // Heavy-tailed |phi| = u^-a with a random tail exponent, some atoms zeroed.
  const double tail = uniform(rng, 0.1, 1.5);
  const double keep = uniform(rng, 0.05, 1.0);
  RealField phi(mu.size());
  for (Index i = 0; i < mu.size(); ++i) {
    const double u = std::max(uniform01(rng), 1e-12);
    phi[i] = uniform01(rng) < keep ? std::pow(u, -tail) : 0.0;
  }
  // B: a random closed ball unioned with a random scatter of atoms.
  RealField in_b = random_set(mu, rng);
  const double scatter = uniform(rng, 0.0, 0.3);
  for (Index i = 0; i < mu.size(); ++i)
    if (uniform01(rng) < scatter) in_b[i] = 1.0;

  double lhs = 0.0, mass = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    if (in_b[i] == 0.0) continue;
    lhs += std::pow(phi[i], p) * mu.weight(i);
    mass += mu.weight(i);
  }
  const double rhs = std::pow(mass, 1.0 - p) * std::pow(weak_l1_norm(phi, mu), p) / (1.0 - p);
  SublemmaTrial out;
  out.p = p;
  out.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
  return out;
}

// ---- maximal function norms ----

Eigen::MatrixXd maximal_columns(const VerifyContext& ctx, Index first, Index count) {
  const DiscreteMeasure& mu = ctx.mu;
  Eigen::MatrixXd phi(mu.size(), count);
  for (Index c = 0; c < count; ++c) {
    Rng rng = trial_rng(ctx.seed, stream_maximal, static_cast<std::uint64_t>(first + c));
    if ((first + c) % 2 == 0) {
      for (Index i = 0; i < mu.size(); ++i) phi(i, c) = uniform01(rng);
    } else {
      phi.col(c).setZero();
      const int spikes = 1 + static_cast<int>(rng() % 5);
      for (int s = 0; s < spikes; ++s) phi(uniform_index(rng, mu.size()), c) = uniform(rng, 0.1, 1.0);
    }
  }
  return phi;
}

struct MaximalFields {
  Eigen::MatrixXd hl;
  Eigen::MatrixXd restricted;
};

MaximalFields maximal_fields(const VerifyContext& ctx, const Eigen::MatrixXd& phi) {
  const DiscreteMeasure& mu = ctx.mu;
  MaximalFields out{Eigen::MatrixXd(mu.size(), phi.cols()), Eigen::MatrixXd(mu.size(), phi.cols())};
  parallel_for(mu.size(), ctx.jobs, [&](Index i) {
    const CenterIndex idx(mu, mu.point(i));
    out.hl.row(i) = ball_average_max_batch(idx, event_counts(idx), phi);
    out.restricted.row(i) = ball_average_max_batch(idx, doubling_counts(idx), phi);
  });
  return out;
}

double l2_norm(const DiscreteMeasure& mu, const Eigen::Ref<const RealField>& f) {
  double s = 0.0;
  for (Index i = 0; i < mu.size(); ++i) s += f[i] * f[i] * mu.weight(i);
  return std::sqrt(s);
}

/// Column ratios ||M phi|| / ||phi|| (row 0) and ||M~ phi|| / ||phi|| (row 1).
Eigen::MatrixXd maximal_ratios(const VerifyContext& ctx, const Eigen::MatrixXd& phi,
                               const MaximalFields& f) {
  Eigen::MatrixXd ratios(2, phi.cols());
  for (Index c = 0; c < phi.cols(); ++c) {
    const double base = l2_norm(ctx.mu, phi.col(c));
    ratios(0, c) = base > 0.0 ? l2_norm(ctx.mu, f.hl.col(c)) / base : 0.0;
    ratios(1, c) = base > 0.0 ? l2_norm(ctx.mu, f.restricted.col(c)) / base : 0.0;
  }
  return ratios;
}

}  // namespace

CheckReport check_obvious(const VerifyContext& ctx, Index trials) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport rep = make_report(ctx, "obvious");
  rep.trials = trials;
  rep.statistic_kind = "max normalized outer integral of |T eta|";
  rep.has_bound = true;
  rep.bound_formula = "holder_const * C0 * (1 + 1/eps)";
  rep.bound = ctx.obvious_constant();

  std::vector<ObviousTrial> results(static_cast<std::size_t>(trials));
  parallel_for(trials, ctx.jobs,
               [&](Index t) { results[static_cast<std::size_t>(t)] = obvious_trial(ctx, t); });

  Index generalized_violations = 0;
  double generalized_ratio = 0.0;
  for (Index t = 0; t < trials; ++t) {
    const ObviousTrial& r = results[static_cast<std::size_t>(t)];
    if (r.skipped) {
      ++rep.skipped;
      continue;
    }
    if (r.lhs > rep.bound) ++rep.violations;
    if (r.lhs_phi > r.rhs_phi) ++generalized_violations;
    if (r.rhs_phi > 0.0) generalized_ratio = std::max(generalized_ratio, r.lhs_phi / r.rhs_phi);
    if (rep.witness.trial < 0 || r.lhs > rep.statistic) {
      rep.statistic = r.lhs;
      rep.witness = Witness{t, -1, r.x, r.rho, r.lhs};
    }
  }
  rep.metrics = {{"generalized_max_ratio", generalized_ratio},
                 {"generalized_violations", static_cast<double>(generalized_violations)}};
  rep.passed = rep.violations == 0 && generalized_violations == 0;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_truncation81(const VerifyContext& ctx, Index trials) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport rep = make_report(ctx, "trunc81");
  rep.trials = trials;
  rep.statistic_kind = "max |T_r chi_F - T_3R chi_F|";
  rep.has_bound = true;
  rep.bound_formula = "81 * size_const * C0";
  rep.bound = ctx.truncation_constant();
  if (ctx.mu.size() < 2) throw Error("check_truncation81: need at least two atoms");

  std::vector<TruncTrial> results(static_cast<std::size_t>(trials));
  parallel_for(trials, ctx.jobs,
               [&](Index t) { results[static_cast<std::size_t>(t)] = trunc_trial(ctx, t); });

  Index not_minimal = 0, two_step_failures = 0;
  for (Index t = 0; t < trials; ++t) {
    const TruncTrial& r = results[static_cast<std::size_t>(t)];
    if (r.diff > rep.bound) ++rep.violations;
    if (!r.minimal) ++not_minimal;
    if (!r.two_step_ok) ++two_step_failures;
    if (rep.witness.trial < 0 || r.diff > rep.statistic) {
      rep.statistic = r.diff;
      rep.witness = Witness{t, -1, r.x, r.r, r.diff};
    }
  }
  rep.metrics = {{"stop_not_minimal", static_cast<double>(not_minimal)},
                 {"two_step_failures", static_cast<double>(two_step_failures)}};
  rep.passed = rep.violations == 0 && not_minimal == 0 && two_step_failures == 0;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_key_lemma(VerifyContext& ctx, Index sets) {
  const auto start = std::chrono::steady_clock::now();
  const double norm = ctx.ensure_opnorm();
  CheckReport rep = make_report(ctx, "key-lemma");
  rep.trials = sets;
  rep.statistic_kind = "max T#chi_F - M(T chi_F)";
  rep.has_bound = true;
  rep.bound_formula = "81 S C0 + 2 holder_const C0 (1 + 1/eps) + 3 ||T||";
  rep.bound = ctx.key_lemma_constant();

  for (Index s = 0; s < sets; ++s) {
    const KeyLemmaSet r = key_lemma_set(ctx, s);
    for (Index i = 0; i < r.excess.size(); ++i) {
      if (r.excess[i] > rep.bound) ++rep.violations;
      if (rep.witness.trial < 0 || r.excess[i] > rep.statistic) {
        rep.statistic = r.excess[i];
        rep.witness = Witness{s, i, ctx.mu.point(i), 0.0, r.excess[i]};
      }
    }
  }
  rep.metrics = {{"opnorm", norm}};
  rep.passed = rep.violations == 0;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_sublemma(const VerifyContext& ctx, Index trials,
                           const std::vector<double>& p_list) {
  const auto start = std::chrono::steady_clock::now();
  for (double p : p_list)
    if (!(p > 0.0 && p < 1.0)) throw Error("check_sublemma: p must lie in (0, 1)");
  CheckReport rep = make_report(ctx, "sublemma");
  rep.trials = trials * static_cast<Index>(p_list.size());
  rep.statistic_kind = "max lhs / (C_p mu(B)^(1-p) ||phi||_{1,inf}^p)";
  rep.has_bound = true;
  rep.bound_formula = "1 (C_p = 1/(1-p) inside the ratio)";
  rep.bound = 1.0;

  const Index np = static_cast<Index>(p_list.size());
  std::vector<SublemmaTrial> results(static_cast<std::size_t>(trials * np));
  parallel_for(trials * np, ctx.jobs, [&](Index k) {
    results[static_cast<std::size_t>(k)] =
        sublemma_trial(ctx, k / np, p_list[static_cast<std::size_t>(k % np)], k % np);
  });
  for (Index k = 0; k < trials * np; ++k) {
    const SublemmaTrial& r = results[static_cast<std::size_t>(k)];
    if (r.ratio > rep.bound) ++rep.violations;
    if (rep.witness.trial < 0 || r.ratio > rep.statistic) {
      rep.statistic = r.ratio;
      rep.witness = Witness{k / np, k % np, Point{}, r.p, r.ratio};
    }
  }
  // Saturating family: phi constant on the whole space gives lhs / bound = 1 - p.
  const RealField ones = RealField::Ones(ctx.mu.size());
  const double mass = ctx.mu.total_mass();
  for (std::size_t j = 0; j < p_list.size(); ++j) {
    const double p = p_list[j];
    const double bound = std::pow(mass, 1.0 - p) * std::pow(weak_l1_norm(ones, ctx.mu), p) / (1.0 - p);
    rep.metrics.emplace_back("saturating_fraction_p" + std::to_string(j), mass / bound);
  }
  rep.passed = rep.violations == 0;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_maximal_bounds(const VerifyContext& ctx, Index trials) {
  const auto start = std::chrono::steady_clock::now();
  if (!ctx.mu.nonnegative()) throw Error("check_maximal_bounds: measure must be nonnegative");
  CheckReport rep = make_report(ctx, "maximal");
  rep.trials = trials;
  rep.statistic_kind = "max ||M phi||_2 / ||phi||_2 over M and M~";
  rep.has_bound = true;
  rep.bound_formula = "100";
  rep.bound = 100.0;

  const Eigen::MatrixXd phi = maximal_columns(ctx, 0, trials);
  const MaximalFields fields = maximal_fields(ctx, phi);
  const Eigen::MatrixXd ratios = maximal_ratios(ctx, phi, fields);
  double max_hl = 0.0, max_restricted = 0.0;
  for (Index c = 0; c < trials; ++c) {
    max_hl = std::max(max_hl, ratios(0, c));
    max_restricted = std::max(max_restricted, ratios(1, c));
    // witness.point_index: 0 for M, 1 for M~.
    for (Index which = 0; which < 2; ++which) {
      if (ratios(which, c) > rep.bound) ++rep.violations;
      if (rep.witness.trial < 0 || ratios(which, c) > rep.statistic) {
        rep.statistic = ratios(which, c);
        rep.witness = Witness{c, which, Point{}, 0.0, ratios(which, c)};
      }
    }
  }

  // Weak-type ratio t mu{MF > t} / int_{F > t/2} F over positive columns.
  double weak_c = 0.0;
  for (Index c = 0; c < trials; ++c) {
    for (double t : default_t_grid(fields.hl.col(c), 16)) {
      double tail = 0.0, level = 0.0;
      for (Index i = 0; i < ctx.mu.size(); ++i) {
        if (fields.hl(i, c) > t) level += ctx.mu.weight(i);
        if (phi(i, c) > t / 2.0) tail += phi(i, c) * ctx.mu.weight(i);
      }
      if (tail > 0.0) weak_c = std::max(weak_c, t * level / tail);
    }
  }
  rep.metrics = {{"max_ratio_M", max_hl}, {"max_ratio_Mtilde", max_restricted}, {"weak_C", weak_c}};
  rep.passed = rep.violations == 0;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_mass_function(const VerifyContext& ctx, const DiscreteMeasure& nu,
                                const std::vector<double>& t_grid) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport rep = make_report(ctx, "mass-function");
  rep.trials = static_cast<Index>(t_grid.size());
  rep.statistic_kind = "max int m dmu / ||nu||";
  rep.has_bound = true;
  rep.bound_formula = "10 * C0";

  // The growth condition is over every center; the disks sit at nu-atoms,
  // which are not mu-atoms, so the constant is taken over those centers too.
  double c0 = ctx.c0;
  for (Index j = 0; j < nu.size(); ++j) {
    const CenterIndex idx(ctx.mu, nu.point(j));
    for (Index e : idx.group_ends()) {
      const double d = idx.distance(e - 1);
      if (d > 0.0) c0 = std::max(c0, idx.prefix_weight()[e - 1] / d);
    }
  }
  rep.bound = 10.0 * c0;
  const double norm = total_variation(nu);

  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const CZDecomposition dec = cz_disks(nu, ctx.mu, t_grid[k]);
    if (dec.exhausted) {
      ++rep.skipped;
      continue;
    }
    const double value = norm > 0.0 ? mass_function_integral(dec, ctx.mu) / norm : 0.0;
    if (value > rep.bound) ++rep.violations;
    if (rep.witness.trial < 0 || value > rep.statistic) {
      rep.statistic = value;
      rep.witness = Witness{static_cast<Index>(k), -1, Point{}, t_grid[k], value};
    }
  }
  rep.metrics = {{"C0_all_centers", c0}};
  rep.passed = rep.violations == 0;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

double replay_witness(VerifyContext& ctx, const CheckReport& report) {
  const Witness& w = report.witness;
  if (w.trial < 0) throw Error("replay_witness: report has no witness");
  if (report.check == "obvious") return obvious_trial(ctx, w.trial).lhs;
  if (report.check == "trunc81") return trunc_trial(ctx, w.trial).diff;
  if (report.check == "key-lemma") return key_lemma_set(ctx, w.trial).excess[w.point_index];
  if (report.check == "sublemma") return sublemma_trial(ctx, w.trial, w.radius, w.point_index).ratio;
  if (report.check == "maximal") {
    const Eigen::MatrixXd phi = maximal_columns(ctx, w.trial, 1);
    return maximal_ratios(ctx, phi, maximal_fields(ctx, phi))(w.point_index, 0);
  }
  throw Error("replay_witness: no replay for check " + report.check);
}

}  // namespace nhcz
