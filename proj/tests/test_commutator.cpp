#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "fracmap/commutator.hpp"
#include "fracmap/error.hpp"
#include "fracmap/frac_calculus.hpp"
#include "fracmap/norms.hpp"

using namespace fracmap;

namespace {

// Lorentz norm of a step rearrangement, summed by hand over the sorted cells.
double lorentz_by_sorting(const Field& f, double p, double q) {
  std::vector<double> a(f.values().begin(), f.values().end());
  for (double& v : a) v = std::abs(v);
  std::sort(a.begin(), a.end(), std::greater<>());
  const double h = f.grid().cell_volume();
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    acc += std::pow(a[j], q) * (p / q) * (std::pow((j + 1) * h, q / p) - std::pow(j * h, q / p));
  return std::pow(acc, 1.0 / q);
}

Field sample(const Grid& g, double (*fn)(double)) {
  return Field::sample(g, [fn](Point x) { return fn(x[0]); });
}

}  // namespace

TEST_CASE("H vanishes against constants") {
  const Grid g(2, 32);
  const Field u = random_band_limited(g, 5, 1);
  for (double a : {0.3, 1.0, 1.5, 2.0}) CHECK(max_abs(h_alpha(a, u, Field::constant(g, 2.0))) < 1e-12);
}

TEST_CASE("H2 of cos and sin") {
  const Grid g(1, 64);
  const Field h = h_alpha(2.0, sample(g, [](double x) { return std::cos(x); }), sample(g, [](double x) { return std::sin(x); }));
  CHECK(max_abs(h - sample(g, [](double x) { return -std::sin(2.0 * x); })) < 1e-12);
}

TEST_CASE("H2 equals twice the gradient pairing") {
  const Grid g(2, 64);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Field u = random_band_limited(g, 8, 2 * seed), v = random_band_limited(g, 8, 2 * seed + 1);
    const Field grad = hadamard(partial(0, u), partial(0, v)) + hadamard(partial(1, u), partial(1, v));
    CHECK(max_abs(h_alpha(2.0, u, v) - 2.0 * grad) < 1e-10);
  }
}

TEST_CASE("three-term identity for sphere-valued maps") {
  const Grid g(2, 32);
  const Field a = random_band_limited(g, 4, 7), b = random_band_limited(g, 4, 8), c = random_band_limited(g, 4, 9);
  Field u(g, 3);
  for (std::size_t s = 0; s < g.sites(); ++s) {
    const double x = a(s) + 1.0, y = b(s), z = c(s), r = std::sqrt(x * x + y * y + z * z);
    u(s, 0) = x / r, u(s, 1) = y / r, u(s, 2) = z / r;
  }
  for (double alpha : {0.4, 1.0, 1.7}) {
    Field lhs(g, 1);
    for (int i = 0; i < 3; ++i) lhs += h_alpha(alpha, u.component(i), u.component(i));
    CHECK(max_abs(lhs + 2.0 * dot(u, laps(alpha, u))) < 1e-9);
  }
}

TEST_CASE("epsilon window") {
  const auto w = epsilon_window(0.5, 1);
  CHECK(w.lower == doctest::Approx(0.25));
  CHECK(w.upper == doctest::Approx(0.5));
  CHECK(w.contains(default_epsilon(0.5, 1)));
  CHECK_FALSE(w.contains(0.25));
}

TEST_CASE("lower-order majorant") {
  const Grid g(1, 256);
  const Field zero(g, 1);
  const Field u = random_band_limited(g, 6, 3), v = random_band_limited(g, 6, 4);
  CHECK(max_abs(lower_order_bound(0.5, 0.3, zero, v)) == 0.0);
  CHECK(max_abs(lower_order_bound(0.5, 0.3, u, v) - lower_order_bound(0.5, 0.3, v, u)) < 1e-12);
  CHECK_THROWS_AS(lower_order_bound(0.5, 0.2, u, v), InvalidArgument);

  for (const auto& t : lower_order_terms(0.5, 0.3)) CHECK_NOTHROW(t.validate(0.5));
}

TEST_CASE("pointwise constant is stable under refinement") {
  auto c_of = [](int n) {
    const Grid g(1, n);
    const Field u = sample(g, [](double x) { return std::cos(x); });
    return pointwise_constant(0.5, 0.3, u, u);
  };
  const double c1 = c_of(256), c2 = c_of(512);
  CHECK(std::isfinite(c1));
  CHECK(std::abs(c2 / c1 - 1.0) <= 0.10);

  const RatioReport coarse = pointwise_constant_suite(0.5, 0.3, Grid(1, 128), 10, 5);
  const RatioReport fine = pointwise_constant_suite(0.5, 0.3, Grid(1, 256), 10, 5);
  CHECK(std::isfinite(coarse.max_ratio));
  CHECK(std::abs(fine.max_ratio / coarse.max_ratio - 1.0) <= 0.10);
}

TEST_CASE("norm ratio against an independent Lorentz computation") {
  const Grid g(2, 32);
  const Field u = random_band_limited(g, 5, 10), v = random_band_limited(g, 5, 11);
  const double alpha = 1.0, p = 2.0;
  const double expect = lorentz_by_sorting(h_alpha(alpha, u, v), p, 1.0) /
                        (lorentz_by_sorting(laps(alpha, u), p, 2.0) * lorentz_by_sorting(laps(alpha, v), p, 2.0));
  CHECK(commutator_norm_ratio(alpha, u, v) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(commutator_norm_ratio(alpha, Field(g, 1), v) == 0.0);
  CHECK(commutator_norm_ratio(alpha, -3.0 * u, 0.25 * v) == doctest::Approx(expect).epsilon(1e-10));
  CHECK_THROWS_AS(commutator_norm_ratio(2.0, u, v), InvalidArgument);
  CHECK_THROWS_AS(commutator_norm_ratio(alpha, u, v, {1.0, 2.0, 3.0}), InvalidArgument);
}

TEST_CASE("norm ratio suite is finite and refinement stable") {
  const RatioReport a = commutator_ratio_suite(1.0, Grid(2, 32), 10, 3, {}, 4);
  const RatioReport b = commutator_ratio_suite(1.0, Grid(2, 64), 10, 3, {}, 4);
  CHECK(std::isfinite(a.max_ratio));
  CHECK(b.max_ratio <= 1.10 * a.max_ratio);
  CHECK(a.quantiles[0] <= a.quantiles[1]);
  CHECK(a.quantiles[1] <= a.quantiles[2]);
  CHECK(a.quantiles[2] <= a.max_ratio);
  CHECK_THROWS_AS(commutator_ratio_suite(1.0, Grid(2, 32), 0, 3), InvalidArgument);
}

TEST_CASE("Riesz reduction pieces") {
  const Grid g(1, 128);
  const Field u = random_band_limited(g, 8, 1), v = random_band_limited(g, 8, 2);
  for (double alpha : {1.0, 1.5}) {
    const Field lhs = riesz_of_commutator(alpha, 0, u, v);
    CHECK(l2_norm(riesz_reduction_terms(alpha, 0, u, v).sum() - lhs) <= 1e-9 * l2_norm(lhs));
  }
  const ReductionTerms t = riesz_reduction_terms(1.0, 0, u, v);
  CHECK(max_abs(t.h_u_dv) == 0.0);
  CHECK(max_abs(t.h_v_du) == 0.0);
  CHECK(max_abs(t.prod_u_dv) == 0.0);
  CHECK(max_abs(t.prod_v_du) == 0.0);
  CHECK(max_abs(t.riesz_u) > 0.0);

  const Field c = Field::constant(g, 0.0);
  const ReductionTerms z = riesz_reduction_terms(1.5, 0, c, c);
  CHECK(max_abs(z.sum()) == 0.0);
  CHECK_THROWS_AS(riesz_reduction_terms(2.0, 0, u, v), InvalidArgument);

  const Grid g2(2, 32);
  const Field a = random_band_limited(g2, 5, 3), b = random_band_limited(g2, 5, 4);
  for (int axis : {0, 1}) {
    const Field lhs = riesz_of_commutator(1.3, axis, a, b);
    CHECK(l2_norm(riesz_reduction_terms(1.3, axis, a, b).sum() - lhs) <= 1e-9 * l2_norm(lhs));
  }
}
