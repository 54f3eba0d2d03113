#include "nhcz/ball_index.hpp"

#include <algorithm>
#include <cmath>

namespace nhcz {

CenterIndex::CenterIndex(const DiscreteMeasure& mu, Point center) { build(mu, center); }

CenterIndex::CenterIndex(const DiscreteMeasure& mu, Point center,
                         const Eigen::Ref<const RealField>& phi) {
  if (phi.size() != mu.size()) throw Error("ball index: field size mismatch");
  build(mu, center);
  prefix_abs_.resize(size());
  double acc = 0.0;
  for (Index s = 0; s < size(); ++s) {
    acc += std::abs(phi[atom(s)]) * weight_[s];
    prefix_abs_[s] = acc;
  }
}

void CenterIndex::build(const DiscreteMeasure& mu, Point center) {
  center_ = center;
  const Index n = mu.size();
  struct Entry {
    double d;
    Index id;
  };
  std::vector<Entry> entries(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) entries[static_cast<std::size_t>(j)] = {nhcz::distance(mu.point(j), center), j};
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.d < b.d || (a.d == b.d && a.id < b.id);
  });
  distance_.resize(n);
  weight_.resize(n);
  prefix_weight_.resize(n);
  atom_.resize(static_cast<std::size_t>(n));
  group_end_.clear();
  double acc = 0.0;
  for (Index s = 0; s < n; ++s) {
    const Entry& e = entries[static_cast<std::size_t>(s)];
    distance_[s] = e.d;
    atom_[static_cast<std::size_t>(s)] = e.id;
    weight_[s] = mu.weight(e.id);
    acc += weight_[s];
    prefix_weight_[s] = acc;
    if (s > 0 && entries[static_cast<std::size_t>(s - 1)].d != e.d) group_end_.push_back(s);
  }
  if (n > 0) group_end_.push_back(n);
}

Index CenterIndex::closed_count(double r) const {
  const double* begin = distance_.data();
  return static_cast<Index>(std::upper_bound(begin, begin + size(), r) - begin);
}

Index CenterIndex::open_count(double r) const {
  const double* begin = distance_.data();
  return static_cast<Index>(std::lower_bound(begin, begin + size(), r) - begin);
}

BallIndex::BallIndex(const DiscreteMeasure& mu, const std::vector<Point>& centers,
                     std::optional<RealField> phi) {
  centers_.reserve(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto key = std::make_pair(centers[i].real(), centers[i].imag());
    if (!lookup_.emplace(key, i).second) throw Error("build_index: duplicate centers");
    if (phi)
      centers_.emplace_back(mu, centers[i], *phi);
    else
      centers_.emplace_back(mu, centers[i]);
  }
}

const CenterIndex& BallIndex::at(Point center) const {
  auto it = lookup_.find({center.real(), center.imag()});
  if (it == lookup_.end()) throw Error("unindexed center");
  return centers_[it->second];
}

BallIndex build_index(const DiscreteMeasure& mu, const std::vector<Point>& centers,
                      std::optional<RealField> phi) {
  return BallIndex(mu, centers, std::move(phi));
}

double ball_mass(const BallIndex& idx, Point x, double r, bool closed) {
  if (std::isnan(r) || r < 0.0) throw Error("ball_mass: radius must be nonnegative");
  return idx.at(x).mass(r, closed);
}

}  // namespace nhcz
