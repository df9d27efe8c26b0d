#include "fracmap/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <limits>
#include <string>

#include "fracmap/error.hpp"
#include "fracmap/random.hpp"

namespace fracmap {
namespace {

void require_scalar_pair(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid())) throw InvalidArgument("commutator arguments live on different grids");
  if (u.components() != 1 || v.components() != 1) throw InvalidArgument("commutator arguments must be scalar fields");
}

void require_mean_zero(const Field& f, const char* name) {
  const double scale = 1.0 + max_abs(f);
  if (std::abs(f.mean()) > 1e-9 * scale) throw InvalidArgument(std::string(name) + " must be mean-zero");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

void summarize(RatioReport& report) {
  report.samples = report.ratios.size();
  report.max_ratio = report.ratios.empty() ? 0.0 : *std::max_element(report.ratios.begin(), report.ratios.end());
  report.quantiles = {quantile(report.ratios, 0.5), quantile(report.ratios, 0.9), quantile(report.ratios, 0.99)};
}

}  // namespace

Field h_alpha(double alpha, const Field& u, const Field& v) {
  require_scalar_pair(u, v);
  Field out = laps(alpha, hadamard(u, v));
  out -= hadamard(u, laps(alpha, v));
  out -= hadamard(v, laps(alpha, u));
  return out;
}

void ExpansionTerm::validate(double alpha) const {
  if (!(t >= 0.0 && t <= s && s < alpha)) throw InvalidArgument("expansion term needs 0 <= t <= s < alpha");
}

Field ExpansionTerm::evaluate(double alpha, const Field& abs_a, const Field& abs_b) const {
  validate(alpha);
  const Field left = positive_potential(t, abs_a);
  const Field right = apply(inner, positive_potential(alpha - s, abs_b));
  return apply(outer, positive_potential(s - t, hadamard(left, right)));
}

EpsilonWindow epsilon_window(double alpha, int dim) {
  return {alpha / 2.0, std::min(2.0 * alpha, dim + alpha) / 2.0};
}

double default_epsilon(double alpha, int dim) {
  const auto w = epsilon_window(alpha, dim);
  const double eps = 0.55 * alpha;
  const double margin = 1e-6 * alpha;
  return std::clamp(eps, w.lower + margin, w.upper - margin);
}

std::array<ExpansionTerm, 4> lower_order_terms(double alpha, double eps) {
  return {ExpansionTerm{eps, eps}, ExpansionTerm{alpha - eps, alpha - eps}, ExpansionTerm{eps, alpha - eps},
          ExpansionTerm{alpha / 2.0, alpha / 2.0}};
}

Field lower_order_bound(double alpha, double eps, const Field& u, const Field& v) {
  require_scalar_pair(u, v);
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("lower-order majorant needs alpha in (0, 1)");
  const int n = u.grid().dim();
  if (!(alpha < 2.0 * eps)) throw InvalidArgument("epsilon window violated: alpha < 2 eps fails");
  if (!(2.0 * eps < 2.0 * alpha)) throw InvalidArgument("epsilon window violated: 2 eps < 2 alpha fails");
  if (!(2.0 * eps < n + alpha)) throw InvalidArgument("epsilon window violated: 2 eps < n + alpha fails");
  require_mean_zero(u, "u");
  require_mean_zero(v, "v");

  const Field a = abs(laps(alpha, u));
  const Field b = abs(laps(alpha, v));
  Field total(u.grid(), 1);
  for (const auto& term : lower_order_terms(alpha, eps)) total += term.evaluate(alpha, a, b);
  return total;
}

double pointwise_constant(double alpha, double eps, const Field& u, const Field& v) {
  const Field majorant = lower_order_bound(alpha, eps, u, v);
  const Field h = h_alpha(alpha, u, v);
  const double floor = 1e-13 * (1.0 + max_abs(h));
  double worst = 0.0;
  for (std::size_t s = 0; s < h.sites(); ++s) {
    const double lhs = std::abs(h(s));
    if (majorant(s) <= 0.0) {
      if (lhs > floor) return std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, lhs / majorant(s));
  }
  return worst;
}

void RatioExponents::validate() const {
  for (double e : {q, q1, q2})
    if (!(e >= 1.0)) throw InvalidArgument("Lorentz exponents must be >= 1");
  if (std::abs(1.0 / q - (1.0 / q1 + 1.0 / q2)) > 1e-12)
    throw InvalidArgument("Lorentz exponent mismatch: 1/q must equal 1/q1 + 1/q2");
}

double commutator_norm_ratio(double alpha, const Field& u, const Field& v, const RatioExponents& exps) {
  require_scalar_pair(u, v);
  exps.validate();
  const int n = u.grid().dim();
  if (!(alpha > 0.0 && alpha < n)) throw InvalidArgument("norm ratio needs alpha in (0, n)");
  const double p = n / alpha;
  const double num = lorentz_norm(h_alpha(alpha, u, v), {p, exps.q});
  if (num == 0.0) return 0.0;
  const double den = lorentz_norm(laps(alpha, u), {p, exps.q1}) * lorentz_norm(laps(alpha, v), {p, exps.q2});
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

RatioReport commutator_ratio_suite(double alpha, const Grid& grid, std::size_t samples, std::uint64_t seed,
                                   const RatioExponents& exps, int max_mode) {
  if (samples == 0) throw InvalidArgument("ratio suite needs at least one sample");
  RatioReport report;
  report.alpha = alpha;
  report.dim = grid.dim();
  report.points = grid.points();
  report.ratios.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const Field u = random_band_limited(grid, max_mode, SplitMix64::stream(seed, 2 * i)());
    const Field v = random_band_limited(grid, max_mode, SplitMix64::stream(seed, 2 * i + 1)());
    report.ratios.push_back(commutator_norm_ratio(alpha, u, v, exps));
  }
  summarize(report);
  return report;
}

RatioReport pointwise_constant_suite(double alpha, double eps, const Grid& grid, std::size_t samples,
                                     std::uint64_t seed, int max_mode) {
  if (samples == 0) throw InvalidArgument("constant suite needs at least one sample");
  RatioReport report;
  report.alpha = alpha;
  report.epsilon = eps;
  report.dim = grid.dim();
  report.points = grid.points();
  for (std::size_t i = 0; i < samples; ++i) {
    const Field u = random_band_limited(grid, max_mode, SplitMix64::stream(seed, 2 * i)());
    const Field v = random_band_limited(grid, max_mode, SplitMix64::stream(seed, 2 * i + 1)());
    report.ratios.push_back(pointwise_constant(alpha, eps, u, v));
  }
  summarize(report);
  return report;
}

Field ReductionTerms::sum() const {
  Field total = h_u_dv;
  for (const Field* piece : {&h_v_du, &riesz_u, &riesz_v, &prod_v_du, &prod_u_dv}) total += *piece;
  return total;
}

ReductionTerms riesz_reduction_terms(double alpha, int axis, const Field& u, const Field& v) {
  require_scalar_pair(u, v);
  if (!(alpha >= 1.0 && alpha < 2.0)) throw InvalidArgument("Riesz reduction needs alpha in [1, 2)");
  if (axis < 0 || axis >= u.grid().dim()) throw InvalidArgument("Riesz axis out of range");
  require_mean_zero(u, "u");
  require_mean_zero(v, "v");

  const double reduced = alpha - 1.0;
  const Field du = partial(axis, u);
  const Field dv = partial(axis, v);
  const Field lu = laps(alpha, u);
  const Field lv = laps(alpha, v);

  auto riesz_piece = [&](const Field& a, const Field& lb) {
    return hadamard(a, riesz(axis, lb)) - riesz(axis, hadamard(a, lb));
  };

  const Field zero(u.grid(), 1);
  if (reduced == 0.0) return {zero, zero, riesz_piece(u, lv), riesz_piece(v, lu), zero, zero};

  return {-1.0 * h_alpha(reduced, u, dv),
          -1.0 * h_alpha(reduced, v, du),
          riesz_piece(u, lv),
          riesz_piece(v, lu),
          -1.0 * hadamard(laps(reduced, v), du),
          -1.0 * hadamard(laps(reduced, u), dv)};
}

Field riesz_of_commutator(double alpha, int axis, const Field& u, const Field& v) {
  return riesz(axis, h_alpha(alpha, u, v));
}

}  // namespace fracmap
