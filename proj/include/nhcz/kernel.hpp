#ifndef NHCZ_KERNEL_HPP
#define NHCZ_KERNEL_HPP

#include <functional>
#include <span>
#include <string>

#include "nhcz/common.hpp"

namespace nhcz {

enum class KernelId { cauchy, cauchy_re, cauchy_im, custom };

/// A Calderon-Zygmund kernel together with its declared size constant
/// (|K(x,y)| <= size_const / |x-y|) and Hoelder data
/// (|K(x,y)-K(x',y)| <= holder_const |x-x'|^eps / |x-y|^(1+eps) for |x-x'| <= |x-y|/2).
struct KernelSpec {
  KernelId id = KernelId::cauchy;
  double eps = 1.0;
  double size_const = 1.0;
  double holder_const = 2.0;
  std::function<KernelValue(Point, Point)> custom;

  static KernelSpec cauchy();
  static KernelSpec cauchy_re();
  static KernelSpec cauchy_im();
  static KernelSpec tabulated(std::function<KernelValue(Point, Point)> evaluator, double eps,
                              double size_const, double holder_const);

  std::string name() const;
};

KernelSpec parse_kernel(const std::string& name);

/// Hot-path evaluation; the caller guarantees x != y.
inline KernelValue kernel_value(const KernelSpec& k, Point x, Point y) {
  const double dx = x.real() - y.real();
  const double dy = x.imag() - y.imag();
  const double r2 = dx * dx + dy * dy;
  switch (k.id) {
    case KernelId::cauchy: return {dx / r2, -dy / r2};
    case KernelId::cauchy_re: return {dx / r2, 0.0};
    case KernelId::cauchy_im: return {-dy / r2, 0.0};
    case KernelId::custom: return k.custom(x, y);
  }
  return {};
}

/// K(x, y); throws "kernel singularity" when x == y.
KernelValue eval_kernel(const KernelSpec& k, Point x, Point y);

struct PointPair {
  Point x, y;
};
struct HolderTriple {
  Point x, x_prime, y;
};

/// max |K(x,y)| |x-y| over the sample; 0 for an empty sample.
double size_ratio(const KernelSpec& k, std::span<const PointPair> pairs);

/// max over the sample of |K(x,y)-K(x',y)| |x-y|^(1+eps) / |x-x'|^eps and of
/// the transposed difference |K(y,x)-K(y,x')|. Triples with
/// |x-x'| > |x-y|/2 are rejected with an Error.
double holder_ratio(const KernelSpec& k, std::span<const HolderTriple> triples);

}  // namespace nhcz

#endif  // NHCZ_KERNEL_HPP
