#ifndef NHCZ_TRANSFORM_HPP
#define NHCZ_TRANSFORM_HPP

#include <algorithm>
#include <vector>

#include "nhcz/ball_index.hpp"
#include "nhcz/kernel.hpp"
#include "nhcz/measure.hpp"

namespace nhcz {

// The operators act on a density phi given at the atoms of mu:
//   T phi(x) = sum_{y_j != x} K(x, y_j) phi_j w_j.
// The self-atom is dropped, so at an atom T phi is the r -> 0 limit of T_r phi.
// A signed measure nu is handled as the pair (nu, phi = 1).

enum class Orientation { direct, adjoint };

/// Terms K(x, y) phi w (or K(y, x) phi w for the adjoint) in slot order of idx,
/// with zero at distance 0.
template <typename Derived>
ComplexField kernel_terms(const KernelSpec& k, const DiscreteMeasure& mu, const CenterIndex& idx,
                          const Eigen::MatrixBase<Derived>& phi,
                          Orientation side = Orientation::direct) {
  if (phi.size() != mu.size()) throw Error("transform: field size mismatch");
  const Point x = idx.center();
  ComplexField terms(idx.size());
  for (Index s = 0; s < idx.size(); ++s) {
    if (idx.distance(s) == 0.0) {
      terms[s] = 0.0;
      continue;
    }
    const Index j = idx.atom(s);
    const Point y = mu.point(j);
    const KernelValue kv = side == Orientation::direct ? kernel_value(k, x, y) : kernel_value(k, y, x);
    terms[s] = kv * KernelValue(phi(j)) * mu.weight(j);
  }
  return terms;
}

/// Suffix values of T_r at every event radius of idx, from the inside out.
/// Entry g is T_r phi(x) for r equal to the g-th distinct distance.
std::vector<KernelValue> truncation_profile(const CenterIndex& idx, const ComplexField& terms);

template <typename Derived>
KernelValue apply_T(const KernelSpec& k, const DiscreteMeasure& mu, const CenterIndex& idx,
                    const Eigen::MatrixBase<Derived>& phi, Orientation side = Orientation::direct) {
  const ComplexField terms = kernel_terms(k, mu, idx, phi, side);
  KernelValue acc = 0.0;
  for (Index s = 0; s < terms.size(); ++s) acc += terms[s];
  return acc;
}

template <typename Derived>
KernelValue apply_T(const KernelSpec& k, const DiscreteMeasure& mu,
                    const Eigen::MatrixBase<Derived>& phi, Point x) {
  return apply_T(k, mu, CenterIndex(mu, x), phi);
}

/// T of the measure itself (phi = 1).
inline KernelValue apply_T(const KernelSpec& k, const DiscreteMeasure& nu, Point x) {
  return apply_T(k, nu, RealField::Ones(nu.size()), x);
}

template <typename Derived>
KernelValue apply_Tr(const KernelSpec& k, const DiscreteMeasure& mu, const CenterIndex& idx,
                     const Eigen::MatrixBase<Derived>& phi, double r) {
  if (!(r > 0.0)) throw Error("apply_Tr: radius must be positive");
  const ComplexField terms = kernel_terms(k, mu, idx, phi);
  KernelValue total = 0.0, inner = 0.0;
  const Index open = idx.open_count(r);
  for (Index s = 0; s < terms.size(); ++s) {
    total += terms[s];
    if (s < open) inner += terms[s];
  }
  return total - inner;
}

template <typename Derived>
KernelValue apply_Tr(const KernelSpec& k, const DiscreteMeasure& mu,
                     const Eigen::MatrixBase<Derived>& phi, Point x, double r) {
  return apply_Tr(k, mu, CenterIndex(mu, x), phi, r);
}

/// sup_{r>0} |T_r phi(x)|, a maximum over the event radii of x.
template <typename Derived>
double apply_Tsharp(const KernelSpec& k, const DiscreteMeasure& mu, const CenterIndex& idx,
                    const Eigen::MatrixBase<Derived>& phi, Orientation side = Orientation::direct) {
  double best = 0.0;
  for (const KernelValue& v : truncation_profile(idx, kernel_terms(k, mu, idx, phi, side)))
    best = std::max(best, std::abs(v));
  return best;
}

template <typename Derived>
double apply_Tsharp(const KernelSpec& k, const DiscreteMeasure& mu,
                    const Eigen::MatrixBase<Derived>& phi, Point x) {
  return apply_Tsharp(k, mu, CenterIndex(mu, x), phi);
}

inline double apply_Tsharp(const KernelSpec& k, const DiscreteMeasure& nu, Point x) {
  return apply_Tsharp(k, nu, RealField::Ones(nu.size()), x);
}

/// T* phi(x) = sum_{y_j != x} K(y_j, x) phi_j w_j (transposed kernel).
template <typename Derived>
KernelValue apply_Tstar(const KernelSpec& k, const DiscreteMeasure& mu,
                        const Eigen::MatrixBase<Derived>& phi, Point x) {
  return apply_T(k, mu, CenterIndex(mu, x), phi, Orientation::adjoint);
}

/// T phi at each point. Point-parallel; results are independent of jobs.
ComplexField transform_field(const KernelSpec& k, const DiscreteMeasure& mu,
                             const Eigen::Ref<const RealField>& phi,
                             const std::vector<Point>& points, int jobs = 1,
                             Orientation side = Orientation::direct);

RealField tsharp_field(const KernelSpec& k, const DiscreteMeasure& mu,
                       const Eigen::Ref<const RealField>& phi, const std::vector<Point>& points,
                       int jobs = 1);

RealField truncated_field(const KernelSpec& k, const DiscreteMeasure& mu,
                          const Eigen::Ref<const RealField>& phi,
                          const std::vector<Point>& points, double r, int jobs = 1);

struct OperatorNormEstimate {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

/// Largest singular value of M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j) (zero
/// diagonal), the matrix of T on L^2(mu). Block power iteration on M^H M
/// with Rayleigh-Ritz extraction; residual is the relative change at exit.
OperatorNormEstimate opnorm_l2(const KernelSpec& k, const DiscreteMeasure& mu, double tol = 1e-12,
                               int max_iter = 5000, int jobs = 1);

}  // namespace nhcz

#endif  // NHCZ_TRANSFORM_HPP
