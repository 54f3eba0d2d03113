#include <doctest.h>

#include "nhcz/decomposition.hpp"
#include "nhcz/transform.hpp"
#include "oracles.hpp"

using namespace nhcz;

namespace {

DiscreteMeasure segment(Index n) {
  GeneratorSpec spec;
  spec.count = n;
  return generate(spec);
}

DiscreteMeasure midpoints(const DiscreteMeasure& mu, std::vector<Index> left, std::vector<double> w) {
  std::vector<Point> pts;
  for (Index i : left) pts.push_back(0.5 * (mu.point(i) + mu.point(i + 1)) + Point(0, 1e-3));
  return DiscreteMeasure(std::move(pts), Eigen::Map<RealField>(w.data(), static_cast<Index>(w.size())), true);
}

}  // namespace

TEST_CASE("single disk by hand") {
  DiscreteMeasure mu({{1, 0}, {2, 0}, {3, 0}}, RealField::Ones(3), true);
  DiscreteMeasure nu({{0, 0}}, RealField::Constant(1, 2.0), true);
  const CZDecomposition dec = cz_disks(nu, mu, 1.0);
  REQUIRE(dec.disks.size() == 1);
  CHECK_FALSE(dec.exhausted);
  CHECK(dec.disks[0].radius == 2.0);
  CHECK(dec.disks[0].atoms == std::vector<Index>{0, 1});
  CHECK(dec.disks[0].overshoot() == 0.0);
  CHECK(dec.union_mass(mu) == 2.0);
  // sigma at the origin: the cut disk B(0, 4) contains the origin, so sigma = 0.
  CHECK(sigma_at(dec, KernelSpec::cauchy(), mu, Point(0, 0)) == KernelValue(0.0));
  // At x = 10 the cut does not apply: sigma = T chi_E.
  const KernelValue s = sigma_at(dec, KernelSpec::cauchy(), mu, Point(10, 0));
  CHECK(std::abs(s - (1.0 / 9.0 + 1.0 / 8.0)) < 1e-15);
}

TEST_CASE("disks agree with the brute-force construction") {
  const DiscreteMeasure mu = segment(300);
  Rng rng(3);
  std::vector<Index> left;
  std::vector<double> w;
  for (int j = 0; j < 12; ++j) {
    left.push_back(uniform_index(rng, 299));
    w.push_back(uniform(rng, 0.5, 1.5));
  }
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  w.resize(left.size());
  const DiscreteMeasure nu = midpoints(mu, left, w);
  for (double t : {20.0, 60.0, 200.0}) {
    bool exhausted = false;
    const auto expect = oracle::cz_disks(nu, mu, t, exhausted);
    const CZDecomposition dec = cz_disks(nu, mu, t);
    CHECK(dec.exhausted == exhausted);
    REQUIRE(dec.disks.size() == expect.size());
    for (std::size_t j = 0; j < expect.size(); ++j) {
      CHECK(dec.disks[j].radius == expect[j].radius);
      CHECK(dec.disks[j].atoms == expect[j].atoms);
      CHECK(dec.disks[j].overshoot() >= 0.0);
    }
  }
}

TEST_CASE("exhaustion and input errors") {
  const DiscreteMeasure mu = segment(10);
  DiscreteMeasure nu({{0.05, 0.1}}, RealField::Ones(1), true);
  CHECK(cz_disks(nu, mu, 0.5).exhausted);  // needs mass 2 > 1
  CHECK_FALSE(cz_disks(nu, mu, 2.0).exhausted);
  CHECK_THROWS_AS(cz_disks(nu, mu, 0.0), Error);
  DiscreteMeasure signed_nu({{0.05, 0.1}}, RealField::Constant(1, -1.0), false);
  CHECK_THROWS_AS(cz_disks(signed_nu, mu, 1.0), Error);
}

TEST_CASE("sigma, its truncations and the mass function") {
  const DiscreteMeasure mu = segment(200);
  const DiscreteMeasure nu = midpoints(mu, {20, 90, 150}, {1.0, 0.7, 1.3});
  const CZDecomposition dec = cz_disks(nu, mu, 30.0);
  REQUIRE(dec.disks.size() == 3);
  const KernelSpec k = KernelSpec::cauchy();
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = mu.point(uniform_index(rng, mu.size()));
    // Direct sum of T chi_{E_j} over disks whose doubled disk misses x.
    RealField chi = RealField::Zero(mu.size());
    for (const auto& d : dec.disks)
      if (std::abs(x - d.center) > 2.0 * d.radius)
        for (Index a : d.atoms) chi[a] = 1.0;
    CHECK(std::abs(sigma_at(dec, k, mu, x) - oracle::truncated(k, mu, chi, x, 0.0)) < 1e-12);
    const double r = uniform(rng, 0.01, 0.5);
    CHECK(std::abs(sigma_r(dec, k, mu, x, r) - oracle::truncated(k, mu, chi, x, r)) < 1e-12);
    CHECK(sigma_sharp(dec, k, mu, x) == doctest::Approx(oracle::tsharp(k, mu, chi, x)).epsilon(1e-12));
  }
  const ComplexField all = sigma_values(dec, k, mu, 3);
  CHECK(all[17] == sigma_at(dec, k, mu, mu.point(17)));

  double integral = 0.0;
  const RealField m = mass_function(dec, mu.points());
  for (Index i = 0; i < mu.size(); ++i) integral += m[i] * mu.weight(i);
  CHECK(mass_function_integral(dec, mu) == doctest::Approx(integral).epsilon(1e-12));
}
