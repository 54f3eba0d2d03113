#ifndef NHCZ_MAXIMAL_HPP
#define NHCZ_MAXIMAL_HPP

#include <limits>
#include <vector>

#include "nhcz/ball_index.hpp"

namespace nhcz {

// Maximal functions of a density at the atoms of mu, evaluated at a center.
// Ball averages use closed balls at the event radii of the center. Only the
// modulus of phi enters, so complex fields are passed through cwiseAbs().

/// Doubling threshold shared by the restricted maximal function and the
/// two-step stopping rule.
inline constexpr double good_disk_ratio = 81.0;

inline constexpr double radial_blowup = std::numeric_limits<double>::infinity();

/// Slot counts of the closed balls at every event radius of idx.
std::vector<Index> event_counts(const CenterIndex& idx);

/// Slot counts of the closed balls B(x, r), over candidate radii r in
/// {event radii} u {event radii / 3}, that satisfy mu(B(x,3r)) <= 81 mu(B(x,r))
/// and carry positive mass. Sorted and deduplicated.
std::vector<Index> doubling_counts(const CenterIndex& idx);

/// max over the given closed balls of (sum |phi| w) / (sum w), skipping
/// zero-mass balls; `values` are |phi| in atom order.
double ball_average_max(const CenterIndex& idx, const std::vector<Index>& counts,
                        const Eigen::Ref<const RealField>& abs_values);

/// M phi(x) = sup_r mu(B(x,r))^-1 int_B |phi| dmu.
double hl_maximal(const CenterIndex& idx, const Eigen::Ref<const RealField>& abs_phi);
double hl_maximal(const DiscreteMeasure& mu, const Eigen::Ref<const RealField>& phi, Point x);

/// M'_beta phi(x) = (sup_r r^-1 int_B |phi|^beta dmu)^(1/beta); +infinity when
/// x carries an atom with phi != 0.
double radial_maximal(const CenterIndex& idx, const Eigen::Ref<const RealField>& abs_phi,
                      double beta = 1.0);
double radial_maximal(const DiscreteMeasure& mu, const Eigen::Ref<const RealField>& phi, Point x,
                      double beta = 1.0);

struct RestrictedMaximal {
  double value = 0.0;
  /// false when no candidate radius passes the doubling test (value is then 0).
  bool admissible = false;
};

/// M~_beta phi(x): the maximal average of |phi|^beta over good disks only, to the power 1/beta.
RestrictedMaximal restricted_maximal(const CenterIndex& idx,
                                     const Eigen::Ref<const RealField>& abs_phi,
                                     double beta = 1.0);
RestrictedMaximal restricted_maximal(const DiscreteMeasure& mu,
                                     const Eigen::Ref<const RealField>& phi, Point x,
                                     double beta = 1.0);

/// Column-wise ball_average_max for many densities at one center.
Eigen::RowVectorXd ball_average_max_batch(const CenterIndex& idx,
                                          const std::vector<Index>& counts,
                                          const Eigen::MatrixXd& abs_values);

// Point-parallel field versions; `abs_phi` holds |phi| in atom order.
RealField hl_maximal_field(const DiscreteMeasure& mu, const Eigen::Ref<const RealField>& abs_phi,
                           const std::vector<Point>& points, int jobs = 1);
RealField radial_maximal_field(const DiscreteMeasure& mu,
                               const Eigen::Ref<const RealField>& abs_phi,
                               const std::vector<Point>& points, double beta, int jobs = 1);
RealField restricted_maximal_field(const DiscreteMeasure& mu,
                                   const Eigen::Ref<const RealField>& abs_phi,
                                   const std::vector<Point>& points, double beta, int jobs = 1);

struct DoublingStop {
  int k = 1;
  double R = 0.0;
  /// mu_j = mu(closed B(x, 3^j r)) for every j inspected, starting at j = 0.
  std::vector<double> mu_sequence;
  /// radius_j = 3^j r, by repeated multiplication.
  std::vector<double> radii;
  bool two_step = false;
};

/// Smallest k >= 1 with mu_k <= 9 mu_(k-1) (one step) or
/// mu_(k+1) <= 81 mu_(k-1) (two steps), and R = 3^(k-1) r.
DoublingStop doubling_stop(const CenterIndex& idx, double r, bool two_step);
DoublingStop doubling_stop(const DiscreteMeasure& mu, Point x, double r, bool two_step);

}  // namespace nhcz

#endif  // NHCZ_MAXIMAL_HPP
