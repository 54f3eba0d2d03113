#include "nhcz/maximal.hpp"

#include <algorithm>
#include <cmath>

namespace nhcz {

std::vector<Index> event_counts(const CenterIndex& idx) { return idx.group_ends(); }

std::vector<Index> doubling_counts(const CenterIndex& idx) {
  const auto& ends = idx.group_ends();
  std::vector<double> radii;
  radii.reserve(2 * ends.size());
  for (Index e : ends) {
    const double d = idx.distance(e - 1);
    radii.push_back(d);
    radii.push_back(d / 3.0);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  std::vector<Index> counts;
  for (double r : radii) {
    const double inner = idx.mass(r, true);
    if (!(inner > 0.0)) continue;
    if (idx.mass(3.0 * r, true) <= good_disk_ratio * inner) counts.push_back(idx.closed_count(r));
  }
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  return counts;
}

double ball_average_max(const CenterIndex& idx, const std::vector<Index>& counts,
                        const Eigen::Ref<const RealField>& abs_values) {
  double best = 0.0;
  double acc = 0.0;
  Index slot = 0;
  for (Index c : counts) {
    for (; slot < c; ++slot) acc += abs_values[idx.atom(slot)] * idx.weights()[slot];
    const double mass = idx.prefix_weight()[c - 1];
    if (mass > 0.0) best = std::max(best, acc / mass);
  }
  return best;
}

Eigen::RowVectorXd ball_average_max_batch(const CenterIndex& idx,
                                          const std::vector<Index>& counts,
                                          const Eigen::MatrixXd& abs_values) {
  Eigen::RowVectorXd best = Eigen::RowVectorXd::Zero(abs_values.cols());
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(abs_values.cols());
  Index slot = 0;
  for (Index c : counts) {
    for (; slot < c; ++slot) acc += idx.weights()[slot] * abs_values.row(idx.atom(slot));
    const double mass = idx.prefix_weight()[c - 1];
    if (mass > 0.0) best = best.cwiseMax(acc / mass);
  }
  return best;
}

double hl_maximal(const CenterIndex& idx, const Eigen::Ref<const RealField>& abs_phi) {
  if (!(idx.total_mass() > 0.0)) throw Error("hl_maximal: total mass is zero");
  return ball_average_max(idx, idx.group_ends(), abs_phi);
}

double hl_maximal(const DiscreteMeasure& mu, const Eigen::Ref<const RealField>& phi, Point x) {
  if (!mu.nonnegative()) throw Error("hl_maximal: measure must be nonnegative");
  return hl_maximal(CenterIndex(mu, x), phi.cwiseAbs());
}

double radial_maximal(const CenterIndex& idx, const Eigen::Ref<const RealField>& abs_phi,
                      double beta) {
  if (!(beta >= 1.0)) throw Error("radial_maximal: beta must be >= 1");
  double best = 0.0;
  double acc = 0.0;
  Index slot = 0;
  for (Index e : idx.group_ends()) {
    for (; slot < e; ++slot)
      acc += std::pow(abs_phi[idx.atom(slot)], beta) * idx.weights()[slot];
    const double d = idx.distance(e - 1);
    if (d == 0.0) {
      if (acc > 0.0) return radial_blowup;
      continue;
    }
    best = std::max(best, acc / d);
  }
  return beta == 1.0 ? best : std::pow(best, 1.0 / beta);
}

double radial_maximal(const DiscreteMeasure& mu, const Eigen::Ref<const RealField>& phi, Point x,
                      double beta) {
  return radial_maximal(CenterIndex(mu, x), phi.cwiseAbs(), beta);
}

RestrictedMaximal restricted_maximal(const CenterIndex& idx,
                                     const Eigen::Ref<const RealField>& abs_phi, double beta) {
  if (!(beta >= 1.0)) throw Error("restricted_maximal: beta must be >= 1");
  const std::vector<Index> counts = doubling_counts(idx);
  RestrictedMaximal out;
  out.admissible = !counts.empty();
  if (!out.admissible) return out;
  if (beta == 1.0) {
    out.value = ball_average_max(idx, counts, abs_phi);
  } else {
    const RealField powered = abs_phi.array().pow(beta).matrix();
    out.value = std::pow(ball_average_max(idx, counts, powered), 1.0 / beta);
  }
  return out;
}

RestrictedMaximal restricted_maximal(const DiscreteMeasure& mu,
                                     const Eigen::Ref<const RealField>& phi, Point x,
                                     double beta) {
  if (!mu.nonnegative()) throw Error("restricted_maximal: measure must be nonnegative");
  return restricted_maximal(CenterIndex(mu, x), phi.cwiseAbs(), beta);
}

RealField hl_maximal_field(const DiscreteMeasure& mu, const Eigen::Ref<const RealField>& abs_phi,
                           const std::vector<Point>& points, int jobs) {
  RealField out(static_cast<Index>(points.size()));
  parallel_for(out.size(), jobs, [&](Index i) {
    out[i] = hl_maximal(CenterIndex(mu, points[static_cast<std::size_t>(i)]), abs_phi);
  });
  return out;
}

RealField radial_maximal_field(const DiscreteMeasure& mu,
                               const Eigen::Ref<const RealField>& abs_phi,
                               const std::vector<Point>& points, double beta, int jobs) {
  RealField out(static_cast<Index>(points.size()));
  parallel_for(out.size(), jobs, [&](Index i) {
    out[i] = radial_maximal(CenterIndex(mu, points[static_cast<std::size_t>(i)]), abs_phi, beta);
  });
  return out;
}

RealField restricted_maximal_field(const DiscreteMeasure& mu,
                                   const Eigen::Ref<const RealField>& abs_phi,
                                   const std::vector<Point>& points, double beta, int jobs) {
  RealField out(static_cast<Index>(points.size()));
  parallel_for(out.size(), jobs, [&](Index i) {
    out[i] = restricted_maximal(CenterIndex(mu, points[static_cast<std::size_t>(i)]), abs_phi, beta)
                 .value;
  });
  return out;
}

DoublingStop doubling_stop(const CenterIndex& idx, double r, bool two_step) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error("doubling_stop: radius must be positive");
  DoublingStop stop;
  stop.two_step = two_step;
  auto extend = [&] {
    const double next = stop.radii.empty() ? r : stop.radii.back() * 3.0;
    stop.radii.push_back(next);
    stop.mu_sequence.push_back(idx.mass(next, true));
  };
  extend();
  extend();
  if (two_step) extend();
  // mu_j is constant once 3^j r exceeds the largest distance, so the test
  // passes within ceil(log3(diam / r)) + 2 steps.
  for (int k = 1; k < 4096; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const bool pass = two_step ? stop.mu_sequence[uk + 1] <= good_disk_ratio * stop.mu_sequence[uk - 1]
                               : stop.mu_sequence[uk] <= 9.0 * stop.mu_sequence[uk - 1];
    if (pass) {
      stop.k = k;
      stop.R = stop.radii[uk - 1];
      return stop;
    }
    extend();
  }
  throw Error("doubling_stop: no stopping index found");
}

DoublingStop doubling_stop(const DiscreteMeasure& mu, Point x, double r, bool two_step) {
  return doubling_stop(CenterIndex(mu, x), r, two_step);
}

}  // namespace nhcz
