#include "fracmap/kernel_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracmap/error.hpp"
#include "fracmap/random.hpp"

namespace fracmap {
namespace {

void require_distinct(const Quadruple& q) {
  const Point pts[4] = {q.x, q.y, q.eta, q.xi};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (euclidean_distance(pts[i], pts[j], q.dim) == 0.0) throw InvalidArgument("quadruple has coincident points");
}

// | |eta-y|^s - |eta-x|^s | evaluated without cancellation:
// |eta-y|^2 - |eta-x|^2 = (x - y).(2 eta - x - y).
double kernel_difference(Point x, Point y, Point eta, double power, int dim) {
  const double dy = euclidean_distance(eta, y, dim);
  const double dx = euclidean_distance(eta, x, dim);
  if (power == 0.0) return 0.0;
  double sq_diff = 0.0;
  for (int a = 0; a < dim; ++a) sq_diff += (x[a] - y[a]) * (2.0 * eta[a] - x[a] - y[a]);
  const double rel = (sq_diff / (dy + dx)) / dx;  // (dy - dx) / dx
  return std::abs(std::pow(dx, power) * std::expm1(power * std::log1p(rel)));
}

}  // namespace

double euclidean_distance(Point a, Point b, int dim) {
  return dim == 1 ? std::abs(a[0] - b[0]) : std::hypot(a[0] - b[0], a[1] - b[1]);
}

double kernel_lhs(const Quadruple& q) {
  require_distinct(q);
  const double power = -q.dim + q.alpha;
  return kernel_difference(q.x, q.y, q.eta, power, q.dim) * kernel_difference(q.x, q.y, q.xi, power, q.dim);
}

TypeBreakdown kernel_rhs(const Quadruple& q) {
  require_distinct(q);
  if (!(q.epsilon > 0.0 && q.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const int n = q.dim;
  const double e = q.epsilon;
  const double reduced = -n + q.alpha - e;
  const double full = -n + q.alpha;
  const double xy = euclidean_distance(q.x, q.y, n);
  const double y_eta = euclidean_distance(q.y, q.eta, n);
  const double x_eta = euclidean_distance(q.x, q.eta, n);
  const double y_xi = euclidean_distance(q.y, q.xi, n);
  const double x_xi = euclidean_distance(q.x, q.xi, n);
  const double gap = std::pow(xy, 2.0 * e);

  TypeBreakdown out;
  out.type1 = std::pow(y_eta, reduced) * std::pow(x_xi, reduced) * gap;
  out.type2 = std::pow(y_eta, reduced) * std::pow(y_xi, reduced) * gap;
  out.type3 = std::pow(x_eta, reduced) * std::pow(y_xi, reduced) * gap;
  if (xy > 2.0 * x_xi && xy > 2.0 * x_eta) out.type4 = std::pow(x_eta, full) * std::pow(x_xi, full);
  return out;
}

Region classify(Point x, Point y, Point eta, int dim) {
  const double xy = euclidean_distance(x, y, dim);
  const bool near_y = xy <= 2.0 * euclidean_distance(y, eta, dim);
  const bool near_x = xy <= 2.0 * euclidean_distance(x, eta, dim);
  if (near_y && near_x) return Region::chi1;
  if (near_y) return Region::chi2;
  return Region::chi3;
}

RegionBound mvt_region_bounds(Point x, Point y, Point eta, double alpha, double eps, int dim) {
  RegionBound out;
  out.region = classify(x, y, eta, dim);
  const double xy = euclidean_distance(x, y, dim);
  const double x_eta = euclidean_distance(x, eta, dim);
  const double y_eta = euclidean_distance(y, eta, dim);
  out.difference = kernel_difference(x, y, eta, -dim + alpha, dim);
  out.comparability = y_eta / x_eta;
  const double base = out.region == Region::chi3 ? y_eta : x_eta;
  out.bound = std::pow(base, -dim + alpha - eps) * std::pow(xy, eps);
  return out;
}

namespace {

Point random_direction(SplitMix64& rng, int dim) {
  if (dim == 1) return {rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0};
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  return {std::cos(angle), std::sin(angle)};
}

double log_uniform(SplitMix64& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

Point offset(Point base, double r, Point dir) { return {base[0] + r * dir[0], base[1] + r * dir[1]}; }

}  // namespace

Quadruple sample_quadruple(const SearchConfig& config, std::size_t index) {
  SplitMix64 rng = SplitMix64::stream(config.seed, index);
  const int n = config.dim;
  auto uniform_point = [&] {
    Point p{0.0, 0.0};
    for (int a = 0; a < n; ++a) p[a] = config.box * (2.0 * rng.uniform() - 1.0);
    return p;
  };

  Quadruple q;
  q.dim = n;
  q.alpha = config.alpha;
  q.epsilon = config.epsilon;
  for (;;) {
    if (index % 2 == 0) {
      q.x = uniform_point();
      q.y = uniform_point();
      q.eta = uniform_point();
      q.xi = uniform_point();
    } else {
      q.x = uniform_point();
      q.y = offset(q.x, log_uniform(rng, 1e-6, 1.0), random_direction(rng, n));
      const Point eta_base = rng.uniform() < 0.5 ? q.x : q.y;
      q.eta = offset(eta_base, log_uniform(rng, 1e-7, config.box), random_direction(rng, n));
      const Point xi_base = rng.uniform() < 0.5 ? q.x : q.y;
      q.xi = offset(xi_base, log_uniform(rng, 1e-7, config.box), random_direction(rng, n));
    }
    try {
      require_distinct(q);
      return q;
    } catch (const InvalidArgument&) {
      // resample
    }
  }
}

SearchResult constant_search(const SearchConfig& config) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (config.samples < 1000) throw InvalidArgument("constant search needs at least 1000 samples");
  if (config.dim != 1 && config.dim != 2) throw InvalidArgument("dimension must be 1 or 2");

  SearchResult result;
  result.config = config;
  result.chi1_ratio_min = std::numeric_limits<double>::infinity();
  result.chi1_ratio_max = 0.0;
  bool have_worst = false;

  for (std::size_t i = 0; i < config.samples; ++i) {
    const Quadruple q = sample_quadruple(config, i);
    const double lhs = kernel_lhs(q);
    const TypeBreakdown rhs = kernel_rhs(q);
    const double total = rhs.total();

    for (const Point& p : {q.eta, q.xi}) {
      const RegionBound rb = mvt_region_bounds(q.x, q.y, p, q.alpha, q.epsilon, q.dim);
      result.mvt_constant = std::max(result.mvt_constant, rb.ratio());
      if (rb.region == Region::chi1) {
        result.chi1_ratio_min = std::min(result.chi1_ratio_min, rb.comparability);
        result.chi1_ratio_max = std::max(result.chi1_ratio_max, rb.comparability);
      }
    }

    if (total == 0.0) {
      if (lhs > 0.0) {
        std::ostringstream witness;
        witness.precision(17);
        witness << "{\"index\":" << i << ",\"x\":[" << q.x[0] << ',' << q.x[1] << "],\"y\":[" << q.y[0] << ','
                << q.y[1] << "],\"eta\":[" << q.eta[0] << ',' << q.eta[1] << "],\"xi\":[" << q.xi[0] << ','
                << q.xi[1] << "],\"lhs\":" << lhs << "}";
        throw Falsification("kernel estimate falsified: rhs vanishes while lhs > 0", witness.str());
      }
      ++result.skipped;
      continue;
    }
    const double ratio = lhs / total;
    if (!have_worst || ratio > result.c_emp) {
      have_worst = true;
      result.c_emp = ratio;
      result.worst_index = i;
      result.worst = q;
      result.worst_lhs = lhs;
      result.worst_types = rhs;
    }
  }
  if (result.chi1_ratio_max == 0.0) result.chi1_ratio_min = result.chi1_ratio_max = 1.0;
  return result;
}

}  // namespace fracmap
