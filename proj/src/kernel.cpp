#include "nhcz/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace nhcz {

KernelSpec KernelSpec::cauchy() { return {KernelId::cauchy, 1.0, 1.0, 2.0, {}}; }
KernelSpec KernelSpec::cauchy_re() { return {KernelId::cauchy_re, 1.0, 1.0, 2.0, {}}; }
KernelSpec KernelSpec::cauchy_im() { return {KernelId::cauchy_im, 1.0, 1.0, 2.0, {}}; }

KernelSpec KernelSpec::tabulated(std::function<KernelValue(Point, Point)> evaluator, double eps,
                                 double size_const, double holder_const) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("kernel: eps must lie in (0, 1]");
  if (!(size_const > 0.0) || !(holder_const > 0.0))
    throw Error("kernel: constants must be positive");
  if (!evaluator) throw Error("kernel: custom kernel needs an evaluator");
  return {KernelId::custom, eps, size_const, holder_const, std::move(evaluator)};
}

std::string KernelSpec::name() const {
  switch (id) {
    case KernelId::cauchy: return "cauchy";
    case KernelId::cauchy_re: return "cauchy_re";
    case KernelId::cauchy_im: return "cauchy_im";
    case KernelId::custom: return "custom";
  }
  return "unknown";
}

KernelSpec parse_kernel(const std::string& name) {
  if (name == "cauchy") return KernelSpec::cauchy();
  if (name == "cauchy_re") return KernelSpec::cauchy_re();
  if (name == "cauchy_im") return KernelSpec::cauchy_im();
  throw Error("unknown kernel: " + name);
}

KernelValue eval_kernel(const KernelSpec& k, Point x, Point y) {
  if (x == y) throw Error("kernel singularity");
  return kernel_value(k, x, y);
}

double size_ratio(const KernelSpec& k, std::span<const PointPair> pairs) {
  double best = 0.0;
  for (const auto& p : pairs)
    best = std::max(best, std::abs(eval_kernel(k, p.x, p.y)) * distance(p.x, p.y));
  return best;
}

double holder_ratio(const KernelSpec& k, std::span<const HolderTriple> triples) {
  double best = 0.0;
  for (const auto& t : triples) {
    const double shift = distance(t.x, t.x_prime);
    const double dist = distance(t.x, t.y);
    if (!(shift <= 0.5 * dist)) throw Error("holder_ratio: triple violates |x-x'| <= |x-y|/2");
    if (shift == 0.0) continue;
    const double scale = std::pow(dist, 1.0 + k.eps) / std::pow(shift, k.eps);
    const double first = std::abs(eval_kernel(k, t.x, t.y) - eval_kernel(k, t.x_prime, t.y));
    const double second = std::abs(eval_kernel(k, t.y, t.x) - eval_kernel(k, t.y, t.x_prime));
    best = std::max(best, std::max(first, second) * scale);
  }
  return best;
}

}  // namespace nhcz
