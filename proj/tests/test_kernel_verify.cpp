#include <cmath>

#include "doctest.h"
#include "fracmap/error.hpp"
#include "fracmap/kernel_verify.hpp"
#include "fracmap/random.hpp"

using namespace fracmap;

namespace {

Quadruple line(double x, double y, double eta, double xi, double alpha, double eps) {
  Quadruple q;
  q.dim = 1;
  q.x = {x, 0.0};
  q.y = {y, 0.0};
  q.eta = {eta, 0.0};
  q.xi = {xi, 0.0};
  q.alpha = alpha;
  q.epsilon = eps;
  return q;
}

Quadruple scaled(Quadruple q, double s, Point shift = {0.0, 0.0}) {
  for (Point* p : {&q.x, &q.y, &q.eta, &q.xi})
    for (int i = 0; i < 2; ++i) (*p)[i] = s * (*p)[i] + shift[i];
  return q;
}

}  // namespace

TEST_CASE("kernel difference by hand") {
  CHECK(kernel_lhs(line(0.0, 1.0, 2.0, -1.0, 0.0, 0.5)) == doctest::Approx(0.25));
  // x -> y makes both differences vanish
  CHECK(kernel_lhs(line(0.3, 0.3 + 1e-13, 2.0, -1.0, 0.5, 0.35)) < 1e-12);
  CHECK_THROWS_AS(kernel_lhs(line(0.0, 1.0, 1.0, -1.0, 0.5, 0.35)), InvalidArgument);
}

TEST_CASE("majorant types at a fixed configuration") {
  const Quadruple q = line(0.0, 0.1, 5.0, -5.0, 0.5, 0.35);
  const double e = -1.0 + 0.5 - 0.35, d = 0.1;
  const TypeBreakdown t = kernel_rhs(q);
  CHECK(t.type1 == doctest::Approx(std::pow(4.9, e) * std::pow(5.0, e) * std::pow(d, 0.7)));
  CHECK(t.type2 == doctest::Approx(std::pow(4.9, e) * std::pow(5.1, e) * std::pow(d, 0.7)));
  CHECK(t.type3 == doctest::Approx(std::pow(5.0, e) * std::pow(5.1, e) * std::pow(d, 0.7)));
  CHECK(t.type4 == 0.0);
  CHECK(kernel_lhs(q) <= t.total());

  // type IV switches on once |x-y| exceeds twice both distances from x
  const TypeBreakdown far = kernel_rhs(line(0.0, 10.0, 0.5, -0.5, 0.5, 0.35));
  CHECK(far.type4 == doctest::Approx(std::pow(0.5, -0.5) * std::pow(0.5, -0.5)));
  CHECK_THROWS_AS(kernel_rhs(line(0.0, 0.1, 5.0, -5.0, 0.5, 1.0)), InvalidArgument);
}

TEST_CASE("swapping eta and xi exchanges types I and III") {
  for (std::size_t i = 0; i < 200; ++i) {
    SearchConfig cfg;
    cfg.dim = 1 + static_cast<int>(i % 2);
    const Quadruple q = sample_quadruple(cfg, i);
    Quadruple s = q;
    std::swap(s.eta, s.xi);
    const TypeBreakdown a = kernel_rhs(q), b = kernel_rhs(s);
    CHECK(b.type1 == doctest::Approx(a.type3));
    CHECK(b.type3 == doctest::Approx(a.type1));
    CHECK(b.total() == doctest::Approx(a.total() - a.type2 - a.type4 + b.type2 + b.type4));
  }
}

TEST_CASE("translation and scaling leave the ratio unchanged") {
  SplitMix64 rng(4);
  for (std::size_t i = 0; i < 50; ++i) {
    SearchConfig cfg;
    cfg.dim = 2;
    const Quadruple q = sample_quadruple(cfg, i);
    const double base = kernel_lhs(q) / kernel_rhs(q).total();
    const Quadruple moved = scaled(q, 1.0, {3.0 * rng.uniform(), -2.0 * rng.uniform()});
    CHECK(kernel_lhs(moved) == doctest::Approx(kernel_lhs(q)).epsilon(1e-9));
    if (i < 10) {
      const double lambda = std::exp(4.0 * rng.uniform() - 2.0);
      const Quadruple big = scaled(q, lambda);
      CHECK(kernel_lhs(big) / kernel_rhs(big).total() == doctest::Approx(base).epsilon(1e-9));
    }
  }
}

TEST_CASE("region classification") {
  const Point x{0.0, 0.0}, y{1.0, 0.0};
  CHECK(classify(x, y, {0.5, 2.0}, 2) == Region::chi1);
  CHECK(classify(x, y, {0.2, 0.0}, 1) == Region::chi2);
  CHECK(classify(x, y, {0.9, 0.0}, 1) == Region::chi3);

  for (std::size_t i = 0; i < 2000; ++i) {
    SearchConfig cfg;
    const Quadruple q = sample_quadruple(cfg, i);
    const double dxy = euclidean_distance(q.x, q.y, 1), dye = euclidean_distance(q.y, q.eta, 1),
                 dxe = euclidean_distance(q.x, q.eta, 1);
    const Region r = classify(q.x, q.y, q.eta, 1);
    if (dxy <= 2 * dye && dxy <= 2 * dxe) CHECK(r == Region::chi1);
    else if (dxy <= 2 * dye) CHECK(r == Region::chi2);
    else CHECK(r == Region::chi3);

    const RegionBound b = mvt_region_bounds(q.x, q.y, q.eta, 0.5, 0.35, 1);
    if (b.region == Region::chi1) {
      CHECK(b.comparability >= 1.0 / 3.0 - 1e-12);
      CHECK(b.comparability <= 3.0 + 1e-12);
    }
    if (b.region == Region::chi2)
      CHECK(b.bound == doctest::Approx(std::pow(dxe, -1.0 + 0.5 - 0.35) * std::pow(dxy, 0.35)));
  }
}

TEST_CASE("sampling is deterministic and avoids coincidences") {
  SearchConfig cfg;
  cfg.dim = 2;
  cfg.seed = 17;
  for (std::size_t i = 0; i < 1000; ++i) {
    const Quadruple a = sample_quadruple(cfg, i), b = sample_quadruple(cfg, i);
    CHECK(a.x == b.x);
    CHECK(a.xi == b.xi);
    CHECK(euclidean_distance(a.x, a.y, 2) > 0.0);
    CHECK(euclidean_distance(a.eta, a.xi, 2) > 0.0);
  }
}

TEST_CASE("constant search") {
  SearchConfig cfg;
  cfg.alpha = 0.0;
  cfg.epsilon = 0.5;
  cfg.samples = 10000;
  const SearchResult zero = constant_search(cfg);
  CHECK(std::isfinite(zero.c_emp));
  CHECK(zero.c_emp > 0.0);

  cfg.alpha = 0.5;
  cfg.epsilon = 0.35;
  const SearchResult coarse = constant_search(cfg);
  cfg.samples = 100000;
  const SearchResult fine = constant_search(cfg);
  CHECK(std::isfinite(fine.c_emp));
  CHECK(std::abs(fine.c_emp / coarse.c_emp - 1.0) <= 0.20);
  CHECK(fine.chi1_ratio_min >= 1.0 / 3.0 - 1e-12);
  CHECK(fine.chi1_ratio_max <= 3.0 + 1e-12);
  CHECK(kernel_lhs(fine.worst) / kernel_rhs(fine.worst).total() == doctest::Approx(fine.c_emp));

  cfg.samples = 999;
  CHECK_THROWS_AS(constant_search(cfg), InvalidArgument);
  cfg.samples = 10000;
  cfg.epsilon = 1.0;
  CHECK_THROWS_AS(constant_search(cfg), InvalidArgument);
  cfg.epsilon = 0.5;
  cfg.alpha = 1.2;
  CHECK_THROWS_AS(constant_search(cfg), InvalidArgument);
}
