#include "fracmap/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracmap/commutator.hpp"
#include "fracmap/error.hpp"
#include "fracmap/fit.hpp"
#include "fracmap/frac_calculus.hpp"

namespace fracmap {

double bump_profile(double rho, double radius) {
  const double t = (rho - 0.5 * radius) / (0.5 * radius);
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

Field bump(const Grid& grid, Point center, double radius) {
  if (!(radius > 0.0 && radius <= grid.length() / 2.0)) throw InvalidArgument("bump radius must lie in (0, L/2]");
  return Field::sample(grid, [&](Point x) { return bump_profile(periodic_distance(x, center, grid), radius); });
}

Field CutoffFamily::sum() const {
  Field total = eta.front();
  for (std::size_t k = 1; k < eta.size(); ++k) total += eta[k];
  return total;
}

int max_cutoff_level(double r, const Grid& grid) {
  if (!(r > 0.0)) return -1;
  int k = -1;
  while (std::ldexp(r, k + 2) <= grid.length() / 2.0) ++k;
  return k;
}

namespace {

// Centered differences: max gradient magnitude and max second-derivative entry.
std::array<double, 2> derivative_sup(const Field& f) {
  const Grid& g = f.grid();
  const double h = g.spacing();
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t s = 0; s < f.sites(); ++s) {
    const auto idx = g.index(s);
    auto at = [&](int o0, int o1) { return f(g.site(idx[0] + o0, idx[1] + o1)); };
    const double c = f(s);
    double grad_sq = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const int o0 = a == 0 ? 1 : 0, o1 = a == 1 ? 1 : 0;
      const double plus = at(o0, o1), minus = at(-o0, -o1);
      grad_sq += std::pow((plus - minus) / (2.0 * h), 2);
      d2 = std::max(d2, std::abs(plus - 2.0 * c + minus) / (h * h));
    }
    if (g.dim() == 2) d2 = std::max(d2, std::abs(at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h));
    d1 = std::max(d1, std::sqrt(grad_sq));
  }
  return {d1, d2};
}

Field complement(Field mask) {
  for (double& m : mask.values()) m = 1.0 - m;
  return mask;
}

}  // namespace

CutoffFamily build_cutoffs(Point center, double r, const Grid& grid, std::optional<int> k_max) {
  const int admissible = max_cutoff_level(r, grid);
  if (admissible < 0) throw InvalidArgument("cutoff radius too large: no admissible k_max (need 2r <= L/2)");
  const int levels = k_max.value_or(admissible);
  if (levels < 0 || levels > admissible)
    throw InvalidArgument("cutoff family would wrap around the torus; max admissible k_max = " +
                          std::to_string(admissible));

  CutoffFamily family;
  family.center = center;
  family.r = r;
  family.eta.push_back(bump(grid, center, r));
  for (int k = 1; k <= levels; ++k) {
    const double inner = k == 1 ? r : std::ldexp(r, k);
    family.eta.push_back(bump(grid, center, std::ldexp(r, k + 1)) - bump(grid, center, inner));
  }
  for (int k = 0; k <= levels; ++k) {
    const auto sup = derivative_sup(family.eta[k]);
    const double scale = std::ldexp(r, k);
    family.derivative_constants[0] = std::max(family.derivative_constants[0], sup[0] * scale);
    family.derivative_constants[1] = std::max(family.derivative_constants[1], sup[1] * scale * scale);
  }
  return family;
}

bool DecayTable::nonincreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].ratio > rows[i - 1].ratio) return false;
  return true;
}

bool DecayTable::strictly_decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].lhs < rows[i - 1].lhs)) return false;
  return true;
}

std::optional<double> DecayTable::tail_exponent() const {
  std::vector<double> x, y;
  for (const auto& row : rows) {
    x.push_back(r + row.d);
    y.push_back(row.lhs);
  }
  return loglog_slope(x, y);
}

DecayTable disjoint_support_decay(const Field& f, Point center, double r, double alpha, double q,
                                  const std::vector<double>& d_values) {
  const Grid& grid = f.grid();
  if (f.components() != 1) throw InvalidArgument("decay table needs a scalar field");
  if (!(alpha > 0.0 && alpha < grid.dim())) throw InvalidArgument("decay table needs alpha in (0, n)");
  if (!(q >= 1.0)) throw InvalidArgument("decay table needs q >= 1");
  const Field inside = ball_mask(center, r, grid);
  const double scale = max_abs(f);
  for (std::size_t s = 0; s < f.sites(); ++s)
    if (inside(s) == 0.0 && std::abs(f(s)) > 1e-12 * scale)
      throw InvalidArgument("field is not supported in the declared ball");

  DecayTable table;
  table.alpha = alpha;
  table.r = r;
  table.q = q;
  const Field lf = laps(alpha, f);
  const double rhs = local_lp_norm(lf, q);
  for (double d : d_values) {
    if (!(d > 0.0)) throw InvalidArgument("decay distances must be positive");
    if (!(r + d < grid.length() / 2.0)) throw InvalidArgument("r + d must stay below L/2");
    const Field outside = complement(ball_mask(center, r + d, grid));
    DecayRow row;
    row.d = d;
    row.lhs = local_lp_norm(lf, std::numeric_limits<double>::infinity(), outside);
    row.rhs = rhs;
    row.ratio = rhs > 0.0 ? row.lhs / rhs : 0.0;
    table.rows.push_back(row);
  }
  return table;
}

double LocalizedCommutatorReport::ratio() const {
  const double total = rhs();
  if (total > 0.0) return lhs / total;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

int LocalizedCommutatorReport::dominant_group() const {
  return static_cast<int>(std::max_element(groups.begin(), groups.end()) - groups.begin());
}

LocalizedCommutatorReport localized_commutator_estimate(const Field& v, const Field& w, double alpha, double lambda,
                                                        double r, Point center, std::optional<double> gamma) {
  const Grid& grid = v.grid();
  if (!(grid == w.grid()) || v.components() != 1 || w.components() != 1)
    throw InvalidArgument("localized estimate needs scalar fields on one grid");
  if (!(lambda > 2.0)) throw InvalidArgument("localized estimate needs lambda > 2");
  if (!(alpha > 0.0 && alpha < grid.dim())) throw InvalidArgument("localized estimate needs alpha in (0, n)");
  if (!(r > 0.0 && 4.0 * lambda * r <= grid.length() / 2.0))
    throw InvalidArgument("localized estimate needs 4 lambda r <= L/2");

  const double p = grid.dim() / alpha;
  const CutoffFamily cut = build_cutoffs(center, lambda * r, grid);
  const Field& eta = cut.eta[0];
  const Field ball = ball_mask(center, r, grid);
  const Field a = laps(alpha, v);
  const Field b = laps(alpha, w);

  LocalizedCommutatorReport rep;
  rep.alpha = alpha;
  rep.lambda = lambda;
  rep.r = r;
  rep.lhs = local_lp_norm(h_alpha(alpha, v, w), p, ball);

  const double na = local_lp_norm(a, p);
  const double nb = local_lp_norm(b, p);
  const double nea = local_lp_norm(hadamard(eta, a), p);
  const double neb = local_lp_norm(hadamard(eta, b), p);

  const Field v_far = lapms(alpha, hadamard(Field::constant(grid, 1.0) - eta, a));
  std::vector<double> annulus, levels;
  for (int k = 1; k <= cut.k_max(); ++k) {
    const Field bk = hadamard(cut.eta[k], b);
    const double nbk = local_lp_norm(bk, p);
    annulus.push_back(nbk);
    const double part = local_lp_norm(h_alpha(alpha, v_far, lapms(alpha, bk)), p, ball);
    const double denom = na * nbk;
    rep.tail.push_back(denom > 0.0 ? part / denom : 0.0);
    levels.push_back(std::ldexp(1.0, k));
  }

  if (gamma) {
    rep.gamma = *gamma;
  } else {
    const auto slope = loglog_slope(levels, rep.tail);
    rep.gamma = slope ? std::max(0.0, -*slope) : 0.0;
  }
  const double decay = std::pow(lambda, -rep.gamma);
  double tail_sum = 0.0;
  for (std::size_t k = 0; k < annulus.size(); ++k) tail_sum += std::pow(2.0, -(k + 1.0) * rep.gamma) * annulus[k];

  rep.groups = {nea * neb, decay * nb * nea, decay * na * neb, decay * na * tail_sum};
  return rep;
}

}  // namespace fracmap
