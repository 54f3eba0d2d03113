#include <algorithm>
#include <cmath>

#include "nhcz/verify.hpp"

namespace nhcz {

double CheckReport::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics)
    if (key == name) return value;
  throw Error("report has no metric " + name);
}

std::vector<double> default_fit_grid() {
  std::vector<double> grid{0.0};
  for (int k = -60; k <= 60; ++k) grid.push_back(std::pow(10.0, k / 20.0));
  return grid;
}

ConstantFit fit_constants(const RealField& lhs, const RealField& term1, const RealField& term2,
                          const std::vector<double>& grid) {
  if (lhs.size() != term1.size() || lhs.size() != term2.size())
    throw Error("fit_constants: arrays differ in length");
  ConstantFit fit;
  fit.points = lhs.size();
  std::vector<Index> usable;
  for (Index i = 0; i < lhs.size(); ++i) {
    if (std::isfinite(lhs[i]) && std::isfinite(term1[i]) && std::isfinite(term2[i]))
      usable.push_back(i);
    else
      ++fit.sentinel_count;
  }
  fit.flagged = fit.points > 0 && 20 * fit.sentinel_count > fit.points;

  std::vector<double> sorted_grid = grid;
  std::sort(sorted_grid.begin(), sorted_grid.end());
  bool found = false;
  double best_sum = 0.0;
  for (double b : sorted_grid) {
    double a = 0.0;
    bool feasible = true;
    for (Index i : usable) {
      const double rest = lhs[i] - b * term2[i];
      if (term1[i] > 0.0) {
        a = std::max(a, rest / term1[i]);
      } else if (rest > 0.0) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    if (!found || a + b < best_sum) {
      found = true;
      best_sum = a + b;
      fit.A = a;
      fit.B = b;
    }
  }
  if (!found) throw Error("fit_constants: infeasible at every grid point");
  for (Index i : usable)
    fit.residual = std::max(fit.residual, lhs[i] - fit.A * term1[i] - fit.B * term2[i]);
  return fit;
}

double VerifyContext::obvious_constant() const {
  return kernel.holder_const * c0 * (1.0 + 1.0 / kernel.eps);
}

double VerifyContext::truncation_constant() const { return 81.0 * kernel.size_const * c0; }

double VerifyContext::key_lemma_constant() const {
  if (!opnorm) throw Error("key lemma constant needs the operator norm");
  return truncation_constant() + 2.0 * obvious_constant() + 3.0 * *opnorm;
}

double VerifyContext::assembled_weak_constant() const {
  // mu{|T nu| > (1 + A3) t} <= (mu(E) + exceptional set + sigma tail) with
  // A3 = A2 + 2 S C0 + 100 ||T|| and an exceptional set of measure 2 (A1 + S C0) / t.
  const double a1 = obvious_constant();
  const double a3 = key_lemma_constant() + 2.0 * kernel.size_const * c0 + 100.0 * *opnorm;
  const double real_bound = (1.0 + a3) * (1.0 + 2.0 * (a1 + kernel.size_const * c0) + 2.0);
  // Complex kernels: split into Re K and Im K, each at level t / sqrt 2.
  const bool real_kernel = kernel.id == KernelId::cauchy_re || kernel.id == KernelId::cauchy_im;
  return real_kernel ? real_bound : 2.0 * std::sqrt(2.0) * real_bound;
}

double VerifyContext::ensure_opnorm() {
  if (!opnorm) opnorm = opnorm_l2(kernel, mu, 1e-12, 5000, jobs).value;
  return *opnorm;
}

VerifyContext make_context(DiscreteMeasure mu, KernelSpec kernel, std::uint64_t seed, int jobs,
                           std::string instance) {
  VerifyContext ctx;
  ctx.c0 = ahlfors_constant(mu, jobs).c0;
  ctx.mu = std::move(mu);
  ctx.kernel = std::move(kernel);
  ctx.seed = seed;
  ctx.jobs = jobs;
  ctx.instance = std::move(instance);
  return ctx;
}

std::vector<Point> probe_points(const DiscreteMeasure& mu, Index count, std::uint64_t seed) {
  if (mu.size() < 2) throw Error("probe_points: need at least two atoms");
  Rng rng(mix_seed(seed ^ 0x70726f6265ULL));
  std::vector<Point> out;
  for (Index i = 0; i < count; ++i) {
    const Index a = uniform_index(rng, mu.size());
    const CenterIndex idx(mu, mu.point(a));
    const Index nearest = idx.atom(idx.group_ends().front() == 1 ? 1 : 0);
    const Point p = 0.5 * (mu.point(a) + mu.point(nearest));
    if (mu.find(p) < 0) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](Point a, Point b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DiscreteMeasure probe_measure(const DiscreteMeasure& mu, Index atoms, std::uint64_t seed) {
  std::vector<Point> pts = probe_points(mu, atoms, seed);
  Rng rng(mix_seed(seed ^ 0x6e75ULL));
  RealField w(static_cast<Index>(pts.size()));
  for (Index i = 0; i < w.size(); ++i) w[i] = uniform(rng, 0.5, 1.5);
  w /= w.sum();
  return DiscreteMeasure(std::move(pts), std::move(w), true);
}

RealField random_set(const DiscreteMeasure& mu, Rng& rng) {
  RealField chi = RealField::Zero(mu.size());
  const int balls = 1 + static_cast<int>(rng() % 3);
  for (int b = 0; b < balls; ++b) {
    const Point c = mu.point(uniform_index(rng, mu.size()));
    const CenterIndex idx(mu, c);
    const double far = idx.distance(idx.size() - 1);
    const double near = idx.size() > 1 ? idx.distance(idx.group_ends().front() == 1 ? 1 : 0) : far;
    const double lo = std::log(std::max(near, 1e-300));
    const double hi = std::log(std::max(far / 2.0, near));
    const double radius = std::exp(uniform(rng, lo, std::max(lo, hi)));
    for (Index s = 0; s < idx.closed_count(radius); ++s) chi[idx.atom(s)] = 1.0;
  }
  return chi;
}

RealField random_density(const DiscreteMeasure& mu, std::uint64_t seed) {
  Rng rng(mix_seed(seed ^ 0x706869ULL));
  RealField phi(mu.size());
  for (Index i = 0; i < phi.size(); ++i) phi[i] = uniform(rng, -1.0, 1.0);
  return phi;
}

std::vector<double> default_t_grid(const RealField& abs_field, int count) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index i = 0; i < abs_field.size(); ++i) {
    const double v = std::abs(abs_field[i]);
    if (v > 0.0 && std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  std::vector<double> grid;
  if (!(hi > 0.0)) return grid;
  if (count < 2 || lo == hi) return {lo};
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid.push_back(lo * std::exp(step * i));
  return grid;
}

std::pair<double, double> geometric_tail(double gamma, int k) {
  double direct = 0.0;
  for (int j = 1; j <= k; ++j) direct += std::pow(3.0, (j + 2 - k) * gamma);
  return {direct, std::pow(3.0, 2.0 * gamma) / (1.0 - std::pow(3.0, -gamma))};
}

}  // namespace nhcz
