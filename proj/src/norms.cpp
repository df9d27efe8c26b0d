#include "fracmap/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fracmap/error.hpp"

namespace fracmap {

void LorentzSpec::validate() const {
  if (!(p >= 1.0 && std::isfinite(p))) throw InvalidArgument("Lorentz exponent p must lie in [1, inf)");
  if (!(q >= 1.0)) throw InvalidArgument("Lorentz exponent q must lie in [1, inf]");
}

namespace {

void check_mask(const Field& f, const std::optional<Field>& mask) {
  if (!mask) return;
  if (!(mask->grid() == f.grid()) || mask->components() != 1) throw InvalidArgument("mask must be a scalar field on the same grid");
}

bool in_mask(const std::optional<Field>& mask, std::size_t s) { return !mask || (*mask)(s) > 0.5; }

double pointwise_abs(const Field& f, std::size_t s) {
  if (f.components() == 1) return std::abs(f(s));
  double sq = 0.0;
  for (int c = 0; c < f.components(); ++c) sq += f(s, c) * f(s, c);
  return std::sqrt(sq);
}

}  // namespace

double local_lp_norm(const Field& f, double p, const std::optional<Field>& mask) {
  if (!(p >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
  check_mask(f, mask);
  double acc = 0.0;
  if (std::isinf(p)) {
    for (std::size_t s = 0; s < f.sites(); ++s)
      if (in_mask(mask, s)) acc = std::max(acc, pointwise_abs(f, s));
    return acc;
  }
  for (std::size_t s = 0; s < f.sites(); ++s)
    if (in_mask(mask, s)) acc += std::pow(pointwise_abs(f, s), p);
  return std::pow(acc * f.grid().cell_volume(), 1.0 / p);
}

double lorentz_norm(const Field& f, const LorentzSpec& spec, const std::optional<Field>& mask) {
  spec.validate();
  check_mask(f, mask);

  std::vector<std::pair<double, std::size_t>> cells;
  cells.reserve(f.sites());
  for (std::size_t s = 0; s < f.sites(); ++s)
    if (in_mask(mask, s)) cells.emplace_back(pointwise_abs(f, s), s);
  // Decreasing rearrangement; ties by site index.
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  const double h = f.grid().cell_volume();
  const double inv_p = 1.0 / spec.p;

  if (std::isinf(spec.q)) {
    double sup = 0.0;
    for (std::size_t j = 0; j < cells.size(); ++j)
      sup = std::max(sup, cells[j].first * std::pow((j + 1) * h, inv_p));
    return sup;
  }

  // Step j covers t in ((j-1)h, jh]; int t^{q/p - 1} dt = (p/q) (t_j^{q/p} - t_{j-1}^{q/p}).
  const double s = spec.q / spec.p;
  double acc = 0.0;
  for (std::size_t j = 1; j <= cells.size(); ++j) {
    const double value = cells[j - 1].first;
    if (value == 0.0) break;
    const double tj = j * h;
    const double increment = j == 1 ? std::pow(tj, s) : std::pow(tj, s) * -std::expm1(s * std::log1p(-1.0 / j));
    acc += std::pow(value, spec.q) * increment;
  }
  return std::pow(acc / s, 1.0 / spec.q);
}

}  // namespace fracmap
