#include "nhcz/decomposition.hpp"

#include <algorithm>

#include "nhcz/ball_index.hpp"
#include "nhcz/transform.hpp"

namespace nhcz {

double CZDecomposition::union_mass(const DiscreteMeasure& mu) const {
  double s = 0.0;
  for (Index i = 0; i < mu.size(); ++i)
    if (in_union(i)) s += mu.weight(i);
  return s;
}

double CZDecomposition::total_overshoot() const {
  double s = 0.0;
  for (const auto& d : disks) s += d.overshoot();
  return s;
}

CZDecomposition cz_disks(const DiscreteMeasure& nu, const DiscreteMeasure& mu, double t) {
  if (!(t > 0.0)) throw Error("cz_disks: threshold must be positive");
  if (!mu.nonnegative()) throw Error("cz_disks: background measure must be nonnegative");
  for (Index j = 0; j < nu.size(); ++j)
    if (!(nu.weight(j) > 0.0)) throw Error("cz_disks: nu weights must be positive");

  CZDecomposition dec;
  dec.t = t;
  dec.nu_norm = total_variation(nu);
  dec.owner.assign(static_cast<std::size_t>(mu.size()), -1);
  double remaining = mu.total_mass();
  if (remaining < dec.nu_norm / t) {
    dec.exhausted = true;
    return dec;
  }

  for (Index j = 0; j < nu.size(); ++j) {
    const double target = nu.weight(j) / t;
    if (remaining < target) {
      dec.exhausted = true;
      break;
    }
    const CenterIndex idx(mu, nu.point(j));
    double acc = 0.0;
    Index stop = -1;
    Index slot = 0;
    for (Index e : idx.group_ends()) {
      for (; slot < e; ++slot)
        if (dec.owner[static_cast<std::size_t>(idx.atom(slot))] < 0) acc += idx.weights()[slot];
      if (acc >= target) {
        stop = e;
        break;
      }
    }
    if (stop < 0) {
      dec.exhausted = true;
      break;
    }
    CZDisk disk;
    disk.center = nu.point(j);
    disk.radius = idx.distance(stop - 1);
    disk.alpha = nu.weight(j);
    disk.target = target;
    disk.achieved = acc;
    const Index id = static_cast<Index>(dec.disks.size());
    for (Index s = 0; s < stop; ++s) {
      auto& own = dec.owner[static_cast<std::size_t>(idx.atom(s))];
      if (own < 0) {
        own = id;
        disk.atoms.push_back(idx.atom(s));
      }
    }
    std::sort(disk.atoms.begin(), disk.atoms.end());
    remaining -= acc;
    dec.disks.push_back(std::move(disk));
  }
  return dec;
}

RealField sigma_density(const CZDecomposition& dec, const DiscreteMeasure& mu, Point x) {
  std::vector<char> active(dec.disks.size());
  for (std::size_t j = 0; j < dec.disks.size(); ++j)
    active[j] = distance(x, dec.disks[j].center) > 2.0 * dec.disks[j].radius;
  RealField density = RealField::Zero(mu.size());
  for (Index i = 0; i < mu.size(); ++i) {
    const Index own = dec.owner[static_cast<std::size_t>(i)];
    if (own >= 0 && active[static_cast<std::size_t>(own)]) density[i] = 1.0;
  }
  return density;
}

KernelValue sigma_at(const CZDecomposition& dec, const KernelSpec& k, const DiscreteMeasure& mu,
                     Point x) {
  return apply_T(k, mu, CenterIndex(mu, x), sigma_density(dec, mu, x));
}

ComplexField sigma_values(const CZDecomposition& dec, const KernelSpec& k,
                          const DiscreteMeasure& mu, int jobs) {
  ComplexField out(mu.size());
  parallel_for(mu.size(), jobs, [&](Index i) { out[i] = sigma_at(dec, k, mu, mu.point(i)); });
  return out;
}

KernelValue sigma_r(const CZDecomposition& dec, const KernelSpec& k, const DiscreteMeasure& mu,
                    Point x, double r) {
  return apply_Tr(k, mu, CenterIndex(mu, x), sigma_density(dec, mu, x), r);
}

double sigma_sharp(const CZDecomposition& dec, const KernelSpec& k, const DiscreteMeasure& mu,
                   Point x) {
  return apply_Tsharp(k, mu, CenterIndex(mu, x), sigma_density(dec, mu, x));
}

RealField mass_function(const CZDecomposition& dec, const std::vector<Point>& points) {
  for (const auto& d : dec.disks)
    if (!(d.radius > 0.0)) throw Error("mass_function: disk of radius zero");
  RealField m = RealField::Zero(static_cast<Index>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p)
    for (const auto& d : dec.disks)
      if (distance(points[p], d.center) <= 10.0 * d.radius)
        m[static_cast<Index>(p)] += d.alpha / d.radius;
  return m;
}

double mass_function_integral(const CZDecomposition& dec, const DiscreteMeasure& mu) {
  double s = 0.0;
  for (const auto& d : dec.disks) {
    if (!(d.radius > 0.0)) throw Error("mass_function: disk of radius zero");
    s += d.alpha / d.radius * CenterIndex(mu, d.center).mass(10.0 * d.radius, true);
  }
  return s;
}

}  // namespace nhcz
