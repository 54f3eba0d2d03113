#include <doctest.h>

#include "nhcz/measure.hpp"
#include "oracles.hpp"

using namespace nhcz;

namespace {

DiscreteMeasure random_cloud(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  RealField w(n);
  for (Index i = 0; i < n; ++i) {
    pts.emplace_back(uniform01(rng), uniform01(rng));
    w[i] = uniform(rng, 0.1, 1.0);
  }
  return DiscreteMeasure(std::move(pts), std::move(w), true);
}

}  // namespace

TEST_CASE("atoms are stored in lexicographic order") {
  DiscreteMeasure mu({{1, 0}, {0, 2}, {0, 1}}, RealField::Constant(3, 1.0), true);
  CHECK(mu.point(0) == Point(0, 1));
  CHECK(mu.point(1) == Point(0, 2));
  CHECK(mu.point(2) == Point(1, 0));
  CHECK(mu.find(Point(0, 2)) == 1);
  CHECK(mu.find(Point(5, 5)) == -1);
}

TEST_CASE("invalid measures are rejected") {
  CHECK_THROWS_AS(DiscreteMeasure({{0, 0}, {0, 0}}, RealField::Ones(2), true), Error);
  CHECK_THROWS_AS(DiscreteMeasure({{0, 0}, {1, 0}}, RealField::Constant(2, -1.0), true), Error);
  CHECK_THROWS_AS(DiscreteMeasure({{NAN, 0}}, RealField::Ones(1), true), Error);
  CHECK_NOTHROW(DiscreteMeasure({{0, 0}, {1, 0}}, RealField::Constant(2, -1.0), false));
}

TEST_CASE("Ahlfors constant of small instances") {
  // Uniform segment: the closed ball of radius 1/n around an interior atom holds three atoms.
  GeneratorSpec spec;
  spec.count = 100;
  CHECK(ahlfors_constant(generate(spec)).c0 == doctest::Approx(3.0).epsilon(1e-12));

  DiscreteMeasure two({{0, 0}, {1, 0}}, RealField::Constant(2, 0.5), true);
  CHECK(ahlfors_constant(two).c0 == doctest::Approx(1.0));

  DiscreteMeasure one({{0, 0}}, RealField::Ones(1), true);
  CHECK_THROWS_WITH_AS(ahlfors_constant(one), "degenerate measure", Error);
}

TEST_CASE("Ahlfors constant agrees with the full scan") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const DiscreteMeasure mu = random_cloud(40, seed);
    CHECK(ahlfors_constant(mu, 3).c0 == doctest::Approx(oracle::ahlfors(mu)).epsilon(1e-14));
  }
}

TEST_CASE("normalization gives constant one") {
  GeneratorSpec spec;
  spec.shape = Shape::circle;
  spec.count = 64;
  const DiscreteMeasure mu = normalize_ahlfors(generate(spec));
  CHECK(ahlfors_constant(mu).c0 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weak L1 norm and distribution function") {
  const DiscreteMeasure mu = random_cloud(60, 9);
  Rng rng(4);
  RealField phi(60);
  for (Index i = 0; i < 60; ++i) phi[i] = uniform(rng, -3.0, 3.0) / std::max(uniform01(rng), 0.01);
  CHECK(weak_l1_norm(phi, mu) == doctest::Approx(oracle::weak_l1(phi, mu)).epsilon(1e-14));

  DiscreteMeasure three({{0, 0}, {1, 0}, {2, 0}}, RealField::Ones(3), true);
  RealField f(3);
  f << 1.0, 2.0, 2.0;
  CHECK(distribution_function(f, three, 1.0) == 2.0);  // strict
  CHECK(distribution_function(f, three, 0.5) == 3.0);
  CHECK(weak_l1_norm(f, three) == 4.0);
  CHECK_THROWS_AS(distribution_function(f, three, 0.0), Error);
}

TEST_CASE("generators") {
  GeneratorSpec seg;
  seg.count = 10;
  const DiscreteMeasure s = generate(seg);
  CHECK(s.size() == 10);
  CHECK(s.total_mass() == doctest::Approx(1.0));
  CHECK(s.point(3) == Point(0.3, 0.0));

  GeneratorSpec cantor;
  cantor.shape = Shape::cantor;
  cantor.cantor_depth = 3;
  const DiscreteMeasure c = generate(cantor);
  CHECK(c.size() == 64);
  CHECK(c.total_mass() == doctest::Approx(1.0));

  GeneratorSpec comb;
  comb.shape = Shape::comb;
  comb.count = 70;
  comb.seed = 5;
  const DiscreteMeasure a = generate(comb), b = generate(comb);
  CHECK(a.points() == b.points());
  comb.seed = 6;
  CHECK(generate(comb).points() != a.points());
  CHECK(a.total_mass() == doctest::Approx(1.75));

  CHECK(parse_shape("circle") == Shape::circle);
  CHECK_THROWS_AS(parse_shape("square"), Error);
}
