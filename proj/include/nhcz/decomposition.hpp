#ifndef NHCZ_DECOMPOSITION_HPP
#define NHCZ_DECOMPOSITION_HPP

#include <vector>

#include "nhcz/kernel.hpp"
#include "nhcz/measure.hpp"

namespace nhcz {

/// One disk of the weak-type construction: B(center, radius) takes the
/// not-yet-assigned mu-atoms it contains until their mass reaches alpha / t.
struct CZDisk {
  Point center;
  double radius = 0.0;
  double alpha = 0.0;
  double target = 0.0;
  double achieved = 0.0;
  /// Atom ids of E_j, ascending.
  std::vector<Index> atoms;

  double overshoot() const { return achieved - target; }
};

struct CZDecomposition {
  double t = 0.0;
  double nu_norm = 0.0;
  std::vector<CZDisk> disks;
  /// mu ran out before every nu-atom received its disk.
  bool exhausted = false;
  /// Disk owning each mu-atom, or -1.
  std::vector<Index> owner;

  double union_mass(const DiscreteMeasure& mu) const;
  double total_overshoot() const;
  bool in_union(Index atom) const { return owner[static_cast<std::size_t>(atom)] >= 0; }
};

/// Processes the atoms of nu (positive weights) in canonical order. For atom
/// j the radius r_j is the smallest event distance of x_j at which the
/// unassigned mass of the closed ball reaches alpha_j / t.
CZDecomposition cz_disks(const DiscreteMeasure& nu, const DiscreteMeasure& mu, double t);

/// Indicator, in atom order, of the E_j whose cut disk B(x_j, 2 r_j) does not
/// contain x (strictly: |x - x_j| > 2 r_j).
RealField sigma_density(const CZDecomposition& dec, const DiscreteMeasure& mu, Point x);

/// sigma(x) = sum over disks with |x - x_j| > 2 r_j of T chi_{E_j}(x).
KernelValue sigma_at(const CZDecomposition& dec, const KernelSpec& k, const DiscreteMeasure& mu,
                     Point x);

/// sigma at every mu-atom.
ComplexField sigma_values(const CZDecomposition& dec, const KernelSpec& k,
                          const DiscreteMeasure& mu, int jobs = 1);

/// sigma_r(x): each E_j restricted to atoms at distance >= r from x.
KernelValue sigma_r(const CZDecomposition& dec, const KernelSpec& k, const DiscreteMeasure& mu,
                    Point x, double r);

/// sup_r |sigma_r(x)| over the event radii of x.
double sigma_sharp(const CZDecomposition& dec, const KernelSpec& k, const DiscreteMeasure& mu,
                   Point x);

/// m(x) = sum_j (alpha_j / r_j) chi(|x - x_j| <= 10 r_j).
RealField mass_function(const CZDecomposition& dec, const std::vector<Point>& points);

/// int m dmu = sum_j (alpha_j / r_j) mu(closed B(x_j, 10 r_j)).
double mass_function_integral(const CZDecomposition& dec, const DiscreteMeasure& mu);

}  // namespace nhcz

#endif  // NHCZ_DECOMPOSITION_HPP
