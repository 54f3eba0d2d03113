#include "nhcz/transform.hpp"

#include <cmath>

namespace nhcz {

std::vector<KernelValue> truncation_profile(const CenterIndex& idx, const ComplexField& terms) {
  const auto& ends = idx.group_ends();
  std::vector<KernelValue> prefix_at_start(ends.size());
  KernelValue acc = 0.0;
  Index slot = 0;
  for (std::size_t g = 0; g < ends.size(); ++g) {
    prefix_at_start[g] = acc;
    for (; slot < ends[g]; ++slot) acc += terms[slot];
  }
  std::vector<KernelValue> out(ends.size());
  for (std::size_t g = 0; g < ends.size(); ++g) out[g] = acc - prefix_at_start[g];
  return out;
}

ComplexField transform_field(const KernelSpec& k, const DiscreteMeasure& mu,
                             const Eigen::Ref<const RealField>& phi,
                             const std::vector<Point>& points, int jobs, Orientation side) {
  ComplexField out(static_cast<Index>(points.size()));
  parallel_for(out.size(), jobs, [&](Index i) {
    const CenterIndex idx(mu, points[static_cast<std::size_t>(i)]);
    out[i] = apply_T(k, mu, idx, phi, side);
  });
  return out;
}

RealField tsharp_field(const KernelSpec& k, const DiscreteMeasure& mu,
                       const Eigen::Ref<const RealField>& phi, const std::vector<Point>& points,
                       int jobs) {
  RealField out(static_cast<Index>(points.size()));
  parallel_for(out.size(), jobs, [&](Index i) {
    const CenterIndex idx(mu, points[static_cast<std::size_t>(i)]);
    out[i] = apply_Tsharp(k, mu, idx, phi);
  });
  return out;
}

RealField truncated_field(const KernelSpec& k, const DiscreteMeasure& mu,
                          const Eigen::Ref<const RealField>& phi,
                          const std::vector<Point>& points, double r, int jobs) {
  RealField out(static_cast<Index>(points.size()));
  parallel_for(out.size(), jobs, [&](Index i) {
    const CenterIndex idx(mu, points[static_cast<std::size_t>(i)]);
    out[i] = std::abs(apply_Tr(k, mu, idx, phi, r));
  });
  return out;
}

namespace {

constexpr Index dense_limit = 2048;

/// y = M v and y = M^H v for the weighted kernel matrix, either from a
/// dense copy or evaluated on the fly row by row.
class WeightedKernelMatrix {
 public:
  WeightedKernelMatrix(const KernelSpec& k, const DiscreteMeasure& mu, int jobs)
      : k_(k), mu_(mu), jobs_(jobs), sqrt_w_(mu.weights().cwiseSqrt()) {
    if (mu.size() <= dense_limit) {
      const Index n = mu.size();
      dense_.resize(n, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) dense_(i, j) = entry(i, j);
    }
  }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v) const {
    if (dense_.size()) return dense_ * v;
    Eigen::MatrixXcd out(v.rows(), v.cols());
    parallel_for(v.rows(), jobs_, [&](Index i) {
      Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(v.cols());
      for (Index j = 0; j < v.rows(); ++j) acc += entry(i, j) * v.row(j);
      out.row(i) = acc;
    });
    return out;
  }

  Eigen::MatrixXcd apply_adjoint(const Eigen::MatrixXcd& v) const {
    if (dense_.size()) return dense_.adjoint() * v;
    Eigen::MatrixXcd out(v.rows(), v.cols());
    parallel_for(v.rows(), jobs_, [&](Index j) {
      Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(v.cols());
      for (Index i = 0; i < v.rows(); ++i) acc += std::conj(entry(i, j)) * v.row(i);
      out.row(j) = acc;
    });
    return out;
  }

 private:
  KernelValue entry(Index i, Index j) const {
    if (i == j) return 0.0;
    return sqrt_w_[i] * kernel_value(k_, mu_.point(i), mu_.point(j)) * sqrt_w_[j];
  }

  const KernelSpec& k_;
  const DiscreteMeasure& mu_;
  int jobs_;
  RealField sqrt_w_;
  Eigen::MatrixXcd dense_;
};

/// Removes the components along the first `count` columns of basis, twice
/// (classical Gram-Schmidt with one reorthogonalization pass).
void reorthogonalize(Eigen::VectorXcd& v, const Eigen::MatrixXcd& basis, Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXcd c = basis.leftCols(count).adjoint() * v;
    v -= basis.leftCols(count) * c;
  }
}

}  // namespace

OperatorNormEstimate opnorm_l2(const KernelSpec& k, const DiscreteMeasure& mu, double tol,
                               int max_iter, int jobs) {
  if (!mu.nonnegative()) throw Error("opnorm_l2: measure must be nonnegative");
  const Index n = mu.size();
  OperatorNormEstimate est;
  if (n < 2) return est;

  // Power iteration on M^H M accelerated by Golub-Kahan-Lanczos: the Krylov
  // space of the power iterates is kept (fully reorthogonalized) and the
  // estimate is the largest singular value of the projected bidiagonal.
  const WeightedKernelMatrix m(k, mu, jobs);
  const Index steps = std::min<Index>(n, max_iter);
  Eigen::MatrixXcd u_basis(n, steps), v_basis(n, steps);
  Eigen::MatrixXd bidiag = Eigen::MatrixXd::Zero(steps + 1, steps);

  Rng rng(mix_seed(0x6f706e6f726dULL));
  Eigen::VectorXcd v(n);
  for (Index r = 0; r < n; ++r) v[r] = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
  v.normalize();

  double previous = 0.0;
  int quiet = 0;  // consecutive steps with relative change <= tol
  est.converged = false;
  for (Index j = 0; j < steps; ++j) {
    v_basis.col(j) = v;
    Eigen::VectorXcd u = m.apply(v);
    reorthogonalize(u, u_basis, j);
    const double alpha = u.norm();
    bidiag(j, j) = alpha;
    if (alpha > 0.0) u /= alpha;
    u_basis.col(j) = u;

    Eigen::VectorXcd next = alpha > 0.0 ? Eigen::VectorXcd(m.apply_adjoint(u)) : Eigen::VectorXcd::Zero(n);
    reorthogonalize(next, v_basis, j + 1);
    const double beta = next.norm();
    bidiag(j + 1, j) = beta;

    // Singular values of the (j+2) x (j+1) lower-bidiagonal projection.
    const Eigen::MatrixXd b = bidiag.topLeftCorner(j + 2, j + 1);
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
    est.value = sigma;
    est.iterations = static_cast<int>(j + 1);
    est.residual = sigma > 0.0 ? std::abs(sigma - previous) / sigma : 0.0;
    quiet = j > 0 && est.residual <= tol ? quiet + 1 : 0;
    const bool invariant = beta <= 1e-14 * std::max(sigma, 1e-300);
    if (sigma == 0.0 || invariant || quiet >= 2 || j + 1 == n) {
      est.converged = true;
      break;
    }
    previous = sigma;
    v = next / beta;
  }
  return est;
}

}  // namespace nhcz
