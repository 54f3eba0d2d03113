#ifndef NHCZ_MEASURE_HPP
#define NHCZ_MEASURE_HPP

#include <string>
#include <vector>

#include "nhcz/common.hpp"

namespace nhcz {

/// Finite sum of weighted point masses in the plane.
///
/// Atoms are kept in lexicographic (re, im) order; every reduction over the
/// atoms iterates in this order. Points must be finite and pairwise distinct.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Point> points, RealField weights, bool nonnegative);

  Index size() const { return static_cast<Index>(points_.size()); }
  bool empty() const { return points_.empty(); }
  bool nonnegative() const { return nonnegative_; }

  const std::vector<Point>& points() const { return points_; }
  const RealField& weights() const { return weights_; }
  Point point(Index i) const { return points_[static_cast<std::size_t>(i)]; }
  double weight(Index i) const { return weights_[i]; }

  double total_mass() const;
  DiscreteMeasure scaled(double factor) const;

  /// Index of the atom located exactly at p, or -1.
  Index find(Point p) const;

 private:
  std::vector<Point> points_;
  RealField weights_;
  bool nonnegative_ = true;
};

double total_variation(const DiscreteMeasure& nu);

struct AhlforsConstant {
  double c0 = 0.0;
  /// Largest single atom weight: below this mass scale linear growth cannot hold.
  double resolution_floor = 0.0;
};

/// max over atoms x and positive event distances d of mu(closed B(x,d)) / d.
AhlforsConstant ahlfors_constant(const DiscreteMeasure& mu, int jobs = 1);

/// Scales the weights by 1 / c0 so that the recomputed constant is 1.
DiscreteMeasure normalize_ahlfors(const DiscreteMeasure& mu, int jobs = 1);

/// sup_{t>0} t * mu{|phi| > t}, realized as max_v v * mu{|phi| >= v}.
double weak_l1_norm(const Eigen::Ref<const RealField>& phi, const DiscreteMeasure& mu);

/// mu{|phi| > t} (strict).
double distribution_function(const Eigen::Ref<const RealField>& phi, const DiscreteMeasure& mu,
                             double t);

enum class Shape { segment, circle, cantor, comb };

struct GeneratorSpec {
  Shape shape = Shape::segment;
  Index count = 100;
  std::uint64_t seed = 0;
  double cantor_ratio = 0.25;
  int cantor_depth = 3;
  std::vector<double> comb_densities = {1.0, 0.5, 0.25};

  std::string describe() const;
};

/// Deterministic test-instance families. Only comb consumes the seed.
DiscreteMeasure generate(const GeneratorSpec& spec);

Shape parse_shape(const std::string& name);
std::string shape_name(Shape shape);

}  // namespace nhcz

#endif  // NHCZ_MEASURE_HPP
