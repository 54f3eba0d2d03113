#include "nhcz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace nhcz {

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, RealField weights, bool nonnegative)
    : nonnegative_(nonnegative) {
  if (static_cast<Index>(points.size()) != weights.size())
    throw Error("measure: point and weight counts differ");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].real() != points[b].real()) return points[a].real() < points[b].real();
    return points[a].imag() < points[b].imag();
  });
  points_.reserve(points.size());
  weights_.resize(weights.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Point p = points[order[k]];
    const double w = weights[static_cast<Index>(order[k])];
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw Error("measure: non-finite atom coordinate");
    if (!std::isfinite(w)) throw Error("measure: non-finite weight");
    if (nonnegative && w < 0.0) throw Error("measure: negative weight in nonnegative measure");
    if (!points_.empty() && points_.back() == p) throw Error("measure: duplicate atom point");
    points_.push_back(p);
    weights_[static_cast<Index>(k)] = w;
  }
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (Index i = 0; i < weights_.size(); ++i) s += weights_[i];
  return s;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  DiscreteMeasure out = *this;
  out.weights_ *= factor;
  if (factor < 0.0) out.nonnegative_ = false;
  return out;
}

Index DiscreteMeasure::find(Point p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p, [](Point a, Point b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  if (it != points_.end() && *it == p) return static_cast<Index>(it - points_.begin());
  return -1;
}

double total_variation(const DiscreteMeasure& nu) {
  double s = 0.0;
  for (Index i = 0; i < nu.size(); ++i) s += std::abs(nu.weight(i));
  return s;
}

AhlforsConstant ahlfors_constant(const DiscreteMeasure& mu, int jobs) {
  if (mu.size() < 2) throw Error("degenerate measure");
  if (!mu.nonnegative()) throw Error("ahlfors_constant: measure must be nonnegative");
  const Index n = mu.size();
  RealField per_atom(n);
  parallel_for(n, jobs, [&](Index i) {
    std::vector<std::pair<double, double>> entries;
    entries.reserve(static_cast<std::size_t>(n));
    const Point x = mu.point(i);
    for (Index j = 0; j < n; ++j) entries.emplace_back(distance(mu.point(j), x), mu.weight(j));
    std::sort(entries.begin(), entries.end());
    double mass = 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      mass += entries[k].second;
      const bool group_end = k + 1 == entries.size() || entries[k + 1].first != entries[k].first;
      if (group_end && entries[k].first > 0.0) best = std::max(best, mass / entries[k].first);
    }
    per_atom[i] = best;
  });
  AhlforsConstant out;
  out.c0 = per_atom.maxCoeff();
  out.resolution_floor = mu.weights().maxCoeff();
  return out;
}

DiscreteMeasure normalize_ahlfors(const DiscreteMeasure& mu, int jobs) {
  const AhlforsConstant a = ahlfors_constant(mu, jobs);
  if (!(a.c0 > 0.0)) throw Error("normalize_ahlfors: zero Ahlfors constant");
  return mu.scaled(1.0 / a.c0);
}

double weak_l1_norm(const Eigen::Ref<const RealField>& phi, const DiscreteMeasure& mu) {
  if (phi.size() != mu.size()) throw Error("weak_l1_norm: field size mismatch");
  std::vector<Index> order(static_cast<std::size_t>(mu.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(phi[a]) > std::abs(phi[b]); });
  double mass = 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    mass += mu.weight(order[k]);
    const double v = std::abs(phi[order[k]]);
    const bool group_end = k + 1 == order.size() || std::abs(phi[order[k + 1]]) != v;
    if (group_end) best = std::max(best, v * mass);
  }
  return best;
}

double distribution_function(const Eigen::Ref<const RealField>& phi, const DiscreteMeasure& mu,
                             double t) {
  if (!(t > 0.0)) throw Error("distribution_function: threshold must be positive");
  if (phi.size() != mu.size()) throw Error("distribution_function: field size mismatch");
  double s = 0.0;
  for (Index i = 0; i < mu.size(); ++i)
    if (std::abs(phi[i]) > t) s += mu.weight(i);
  return s;
}

namespace {

void cantor_centers(Point corner, double side, double ratio, int depth, std::vector<Point>& out) {
  if (depth == 0) {
    out.push_back(corner + Point(side / 2, side / 2));
    return;
  }
  const double child = ratio * side;
  const double far = side - child;
  cantor_centers(corner, child, ratio, depth - 1, out);
  cantor_centers(corner + Point(far, 0), child, ratio, depth - 1, out);
  cantor_centers(corner + Point(0, far), child, ratio, depth - 1, out);
  cantor_centers(corner + Point(far, far), child, ratio, depth - 1, out);
}

}  // namespace

DiscreteMeasure generate(const GeneratorSpec& spec) {
  std::vector<Point> points;
  std::vector<double> weights;
  switch (spec.shape) {
    case Shape::segment: {
      if (spec.count < 1) throw Error("generate: count must be >= 1");
      const double n = static_cast<double>(spec.count);
      for (Index j = 0; j < spec.count; ++j) {
        points.emplace_back(static_cast<double>(j) / n, 0.0);
        weights.push_back(1.0 / n);
      }
      break;
    }
    case Shape::circle: {
      if (spec.count < 1) throw Error("generate: count must be >= 1");
      const double n = static_cast<double>(spec.count);
      for (Index j = 0; j < spec.count; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
        points.emplace_back(std::cos(angle), std::sin(angle));
        weights.push_back(1.0 / n);
      }
      break;
    }
    case Shape::cantor: {
      if (!(spec.cantor_ratio > 0.0 && spec.cantor_ratio <= 0.5))
        throw Error("generate: cantor ratio must lie in (0, 1/2]");
      if (spec.cantor_depth < 0 || spec.cantor_depth > 9)
        throw Error("generate: cantor depth must lie in [0, 9]");
      cantor_centers(Point(0, 0), 1.0, spec.cantor_ratio, spec.cantor_depth, points);
      const double w = std::pow(0.25, spec.cantor_depth);
      weights.assign(points.size(), w);
      break;
    }
    case Shape::comb: {
      if (spec.count < 1) throw Error("generate: count must be >= 1");
      if (spec.comb_densities.empty()) throw Error("generate: comb needs at least one density");
      double density_sum = 0.0;
      for (double d : spec.comb_densities) {
        if (!(d > 0.0 && d <= 1.0)) throw Error("generate: comb densities must lie in (0, 1]");
        density_sum += d;
      }
      Rng rng(mix_seed(spec.seed));
      const double teeth = static_cast<double>(spec.comb_densities.size());
      for (std::size_t i = 0; i < spec.comb_densities.size(); ++i) {
        const double d = spec.comb_densities[i];
        const Index n = std::max<Index>(
            1, std::llround(static_cast<double>(spec.count) * d / density_sum));
        const double x = static_cast<double>(i) / teeth;
        // tooth of unit length and mass d; jittered lattice keeps spacing >= 1/(2n)
        for (Index k = 0; k < n; ++k) {
          const double y = (static_cast<double>(k) + uniform(rng, 0.25, 0.75)) / static_cast<double>(n);
          points.emplace_back(x, y);
          weights.push_back(d / static_cast<double>(n));
        }
      }
      break;
    }
  }
  RealField w = Eigen::Map<RealField>(weights.data(), static_cast<Index>(weights.size()));
  return DiscreteMeasure(std::move(points), std::move(w), true);
}

Shape parse_shape(const std::string& name) {
  if (name == "segment") return Shape::segment;
  if (name == "circle") return Shape::circle;
  if (name == "cantor") return Shape::cantor;
  if (name == "comb") return Shape::comb;
  throw Error("unknown shape: " + name);
}

std::string shape_name(Shape shape) {
  switch (shape) {
    case Shape::segment: return "segment";
    case Shape::circle: return "circle";
    case Shape::cantor: return "cantor";
    case Shape::comb: return "comb";
  }
  return "unknown";
}

std::string GeneratorSpec::describe() const {
  std::ostringstream os;
  os << shape_name(shape) << '(';
  switch (shape) {
    case Shape::cantor: os << "ratio=" << cantor_ratio << ",depth=" << cantor_depth; break;
    case Shape::comb:
      os << "n=" << count << ",seed=" << seed << ",densities=";
      for (std::size_t i = 0; i < comb_densities.size(); ++i)
        os << (i ? ":" : "") << comb_densities[i];
      break;
    default: os << "n=" << count; break;
  }
  os << ')';
  return os.str();
}

}  // namespace nhcz
