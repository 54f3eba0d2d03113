#include <vector>

#include <doctest.h>

#include "nhcz/kernel.hpp"

using namespace nhcz;

TEST_CASE("cauchy kernel values") {
  const KernelSpec k = KernelSpec::cauchy();
  const KernelValue v = eval_kernel(k, Point(1, 1), Point(0, 0));
  CHECK(v.real() == doctest::Approx(0.5));
  CHECK(v.imag() == doctest::Approx(-0.5));  // 1 / (1 + i)
  CHECK(eval_kernel(KernelSpec::cauchy_re(), Point(1, 1), Point(0, 0)) == KernelValue(0.5, 0.0));
  CHECK(eval_kernel(KernelSpec::cauchy_im(), Point(1, 1), Point(0, 0)) == KernelValue(-0.5, 0.0));
  CHECK_THROWS_WITH_AS(eval_kernel(k, Point(2, 3), Point(2, 3)), "kernel singularity", Error);
}

TEST_CASE("kernel antisymmetry") {
  const KernelSpec k = KernelSpec::cauchy();
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Point x(uniform01(rng), uniform01(rng)), y(uniform01(rng), uniform01(rng));
    CHECK(std::abs(kernel_value(k, x, y) + kernel_value(k, y, x)) < 1e-12 * std::abs(kernel_value(k, x, y)));
  }
}

TEST_CASE("size axiom holds with constant one") {
  Rng rng(8);
  std::vector<PointPair> pairs;
  for (int i = 0; i < 500; ++i)
    pairs.push_back({Point(uniform(rng, -1, 1), uniform(rng, -1, 1)),
                     Point(uniform(rng, -1, 1), uniform(rng, -1, 1))});
  for (const KernelSpec& k : {KernelSpec::cauchy(), KernelSpec::cauchy_re(), KernelSpec::cauchy_im()})
    CHECK(size_ratio(k, pairs) <= 1.0 + 1e-12);
  CHECK(size_ratio(KernelSpec::cauchy(), pairs) == doctest::Approx(1.0));
  CHECK(size_ratio(KernelSpec::cauchy(), std::vector<PointPair>{}) == 0.0);
}

TEST_CASE("Hoelder axiom") {
  const KernelSpec k = KernelSpec::cauchy();
  // Collinear triple: |K(x,y)-K(x',y)| |x-y|^2 / |x-x'| = |x-y| / |x'-y| = 1 / 0.75.
  const std::vector<HolderTriple> one{{Point(0, 0), Point(0.25, 0), Point(1, 0)}};
  CHECK(holder_ratio(k, one) == doctest::Approx(4.0 / 3.0));

  Rng rng(11);
  std::vector<HolderTriple> triples;
  for (int i = 0; i < 2000; ++i) {
    const Point x(uniform(rng, -1, 1), uniform(rng, -1, 1)), y(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double reach = 0.5 * std::abs(x - y) * uniform01(rng);
    triples.push_back({x, x + std::polar(reach, uniform(rng, 0, 6.283)), y});
  }
  const double ratio = holder_ratio(k, triples);
  CHECK(ratio <= k.holder_const);
  CHECK(ratio > 1.0);

  const std::vector<HolderTriple> bad{{Point(0, 0), Point(0.6, 0), Point(1, 0)}};
  CHECK_THROWS_AS(holder_ratio(k, bad), Error);
}

TEST_CASE("kernel specs") {
  CHECK(parse_kernel("cauchy").name() == "cauchy");
  CHECK(parse_kernel("cauchy_im").id == KernelId::cauchy_im);
  CHECK_THROWS_AS(parse_kernel("riesz"), Error);
  const KernelSpec t = KernelSpec::tabulated([](Point x, Point y) { return 1.0 / (x - y); }, 1.0, 1.0, 2.0);
  CHECK(std::abs(eval_kernel(t, Point(2, 0), Point(0, 0)) - KernelValue(0.5)) < 1e-15);
  CHECK_THROWS_AS(KernelSpec::tabulated(nullptr, 1.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(KernelSpec::tabulated([](Point, Point) { return KernelValue(0); }, 1.5, 1.0, 2.0), Error);
}
