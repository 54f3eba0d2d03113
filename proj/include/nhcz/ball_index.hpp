#ifndef NHCZ_BALL_INDEX_HPP
#define NHCZ_BALL_INDEX_HPP

#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "nhcz/measure.hpp"

namespace nhcz {

/// Distances from one center to every atom, sorted ascending (ties by atom
/// id), with inclusive prefix sums of the weights in that order.
///
/// Every supremum over radii downstream is taken over the distinct distances
/// ("event radii") of this table; the value attached to an event radius d is
/// the closed-ball value at d, which is the limit of the open-ball values as
/// r decreases to d.
class CenterIndex {
 public:
  CenterIndex() = default;
  CenterIndex(const DiscreteMeasure& mu, Point center);
  CenterIndex(const DiscreteMeasure& mu, Point center, const Eigen::Ref<const RealField>& phi);

  Point center() const { return center_; }
  Index size() const { return distance_.size(); }
  const RealField& distances() const { return distance_; }
  double distance(Index slot) const { return distance_[slot]; }
  Index atom(Index slot) const { return atom_[static_cast<std::size_t>(slot)]; }
  const std::vector<Index>& atoms() const { return atom_; }
  const RealField& weights() const { return weight_; }
  const RealField& prefix_weight() const { return prefix_weight_; }
  /// Inclusive prefix of |phi| * weight; empty unless built with phi.
  const RealField& prefix_abs() const { return prefix_abs_; }
  /// One past the last slot of each group of equal distances.
  const std::vector<Index>& group_ends() const { return group_end_; }

  double total_mass() const { return size() ? prefix_weight_[size() - 1] : 0.0; }

  /// Number of slots with distance <= r.
  Index closed_count(double r) const;
  /// Number of slots with distance < r.
  Index open_count(double r) const;

  double mass(double r, bool closed) const {
    const Index c = closed ? closed_count(r) : open_count(r);
    return c ? prefix_weight_[c - 1] : 0.0;
  }

  /// Reorders a per-atom vector into slot order.
  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> gather(
      const Eigen::MatrixBase<Derived>& by_atom) const {
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(size());
    for (Index s = 0; s < size(); ++s) out[s] = by_atom(atom(s));
    return out;
  }

  /// Inclusive prefix sums, in slot order, of a per-atom vector.
  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> prefix(
      const Eigen::MatrixBase<Derived>& by_atom) const {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(size());
    Scalar acc(0);
    for (Index s = 0; s < size(); ++s) {
      acc += by_atom(atom(s));
      out[s] = acc;
    }
    return out;
  }

 private:
  void build(const DiscreteMeasure& mu, Point center);

  Point center_{};
  RealField distance_;
  std::vector<Index> atom_;
  RealField weight_;
  RealField prefix_weight_;
  RealField prefix_abs_;
  std::vector<Index> group_end_;
};

/// Sum over atoms at distance >= r of values(atom), computed as the full sum
/// minus the open-ball prefix.
template <typename Derived>
typename Derived::Scalar suffix_sum(const CenterIndex& idx, double r,
                                    const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  if (idx.size() == 0) return Scalar(0);
  const auto p = idx.prefix(values);
  const Index open = idx.open_count(r);
  return p[idx.size() - 1] - (open ? p[open - 1] : Scalar(0));
}

/// One CenterIndex per declared center.
class BallIndex {
 public:
  BallIndex() = default;
  BallIndex(const DiscreteMeasure& mu, const std::vector<Point>& centers,
            std::optional<RealField> phi = std::nullopt);

  Index size() const { return static_cast<Index>(centers_.size()); }
  const CenterIndex& operator[](Index i) const { return centers_[static_cast<std::size_t>(i)]; }
  /// Throws "unindexed center" for a point that was not declared.
  const CenterIndex& at(Point center) const;

 private:
  std::vector<CenterIndex> centers_;
  std::map<std::pair<double, double>, std::size_t> lookup_;
};

BallIndex build_index(const DiscreteMeasure& mu, const std::vector<Point>& centers,
                      std::optional<RealField> phi = std::nullopt);

inline constexpr double infinite_radius = std::numeric_limits<double>::infinity();

double ball_mass(const BallIndex& idx, Point x, double r, bool closed);

template <typename Derived>
typename Derived::Scalar suffix_sum(const BallIndex& idx, Point x, double r,
                                    const Eigen::MatrixBase<Derived>& values) {
  if (!(r >= 0.0)) throw Error("suffix_sum: radius must be nonnegative");
  return suffix_sum(idx.at(x), r, values);
}

}  // namespace nhcz

#endif  // NHCZ_BALL_INDEX_HPP
