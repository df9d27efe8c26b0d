#include "fracmap/frac_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fft.hpp"
#include "fracmap/error.hpp"

namespace fracmap {
namespace {

double norm_xi(std::array<double, 2> xi, int dim) { return dim == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]); }

void require_finite(const Field& f) {
  if (!f.all_finite()) throw InvalidArgument("operator input contains non-finite values");
}

Field apply_symbol(const Field& f, const std::function<std::complex<double>(std::size_t)>& symbol) {
  FrequencyField F = to_frequency(f);
  const Grid& grid = f.grid();
  for (std::size_t b = 0; b < grid.sites(); ++b) {
    const auto m = symbol(b);
    for (int c = 0; c < f.components(); ++c) F(b, c) *= m;
  }
  return to_field(F);
}

bool on_nyquist(const Grid& grid, std::size_t bin, int axis) { return grid.is_nyquist(bin, axis); }

}  // namespace

std::complex<double> MultiplierOp::symbol(std::array<double, 2> xi, int dim) const {
  const double r = norm_xi(xi, dim);
  switch (kind) {
    case OpKind::identity:
      return 1.0;
    case OpKind::laps:
      if (r == 0.0) return 0.0;
      return sign * std::pow(r, order);
    case OpKind::lapms:
      if (r == 0.0) return 0.0;
      return sign * std::pow(r, -order);
    case OpKind::riesz:
      if (r == 0.0) return 0.0;
      return {0.0, -xi[axis] / r};
  }
  return 0.0;
}

Field apply(const MultiplierOp& op, const Field& f) {
  require_finite(f);
  const Grid& grid = f.grid();
  if ((op.kind == OpKind::laps || op.kind == OpKind::lapms) && !(op.order >= 0.0))
    throw InvalidArgument("operator order must be nonnegative, got " + std::to_string(op.order));
  if (op.kind == OpKind::riesz && (op.axis < 0 || op.axis >= grid.dim()))
    throw InvalidArgument("riesz axis out of range");
  if (op.kind == OpKind::identity) return f;
  return apply_symbol(f, [&](std::size_t b) -> std::complex<double> {
    if (op.is_odd() && on_nyquist(grid, b, op.axis)) return 0.0;
    return op.symbol(grid.wavevector(b), grid.dim());
  });
}

Field laps(double order, const Field& f) { return apply(MultiplierOp::laps(order), f); }
Field lapms(double order, const Field& f) { return apply(MultiplierOp::lapms(order), f); }
Field riesz(int axis, const Field& f) { return apply(MultiplierOp::riesz(axis), f); }

Field partial(int axis, const Field& f) {
  require_finite(f);
  const Grid& grid = f.grid();
  if (axis < 0 || axis >= grid.dim()) throw InvalidArgument("derivative axis out of range");
  return apply_symbol(f, [&](std::size_t b) -> std::complex<double> {
    if (on_nyquist(grid, b, axis)) return 0.0;
    return {0.0, grid.wavevector(b)[axis]};
  });
}

Field positive_potential(double s, const Field& f) {
  require_finite(f);
  const Grid& grid = f.grid();
  if (s == 0.0) return f;
  if (!(s > 0.0 && s <= grid.dim())) throw InvalidArgument("potential order must lie in (0, n]");

  // Discrete kernel g(y) = (1/N) sum_k m(k) e^{i k y} of the mean-free potential;
  // raising the zero mode by -N min g makes the kernel nonnegative.
  const std::size_t n = grid.sites();
  std::vector<std::complex<double>> kernel(n);
  for (std::size_t b = 0; b < n; ++b) {
    const double r = norm_xi(grid.wavevector(b), grid.dim());
    kernel[b] = r == 0.0 ? 0.0 : std::pow(r, -s);
  }
  detail::fft(grid, kernel, detail::FftDirection::backward);
  double kmin = 0.0;
  for (const auto& z : kernel) kmin = std::min(kmin, z.real());
  const double zero_mode = -kmin;  // kernel values above are N * g

  return apply_symbol(f, [&](std::size_t b) -> std::complex<double> {
    const double r = norm_xi(grid.wavevector(b), grid.dim());
    return r == 0.0 ? zero_mode : std::pow(r, -s);
  });
}

namespace {

// Periodized kernel sum_m |z + m L|^{-power} over image lattice, with an
// integral estimate of the image tail.
double periodized_kernel_1d(double z, double L, double power) {
  constexpr int images = 200;
  double acc = 0.0;
  for (int m = -images; m <= images; ++m) {
    const double d = std::abs(z + m * L);
    if (d > 0.0) acc += std::pow(d, -power);
  }
  const double edge = (images + 0.5) * L;
  acc += (std::pow(edge + z, 1.0 - power) + std::pow(edge - z, 1.0 - power)) / ((power - 1.0) * L);
  return acc;
}

double periodized_kernel_2d(double z0, double z1, double L, double power) {
  constexpr int images = 24;
  double acc = 0.0;
  for (int m0 = -images; m0 <= images; ++m0)
    for (int m1 = -images; m1 <= images; ++m1) {
      const double d = std::hypot(z0 + m0 * L, z1 + m1 * L);
      if (d > 0.0) acc += std::pow(d, -power);
    }
  // Tail outside the (2M+1)L square, replaced by the disk of equal area.
  const double radius = (2 * images + 1) * L / std::sqrt(std::numbers::pi);
  acc += 2.0 * std::numbers::pi * std::pow(radius, 2.0 - power) / ((power - 2.0) * L * L);
  return acc;
}

}  // namespace

Field laps_quadrature(double alpha, const Field& f, double sign) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("quadrature order must lie in (0, 1)");
  require_finite(f);
  const Grid& grid = f.grid();
  const int N = grid.points();
  const double h = grid.spacing();
  const double L = grid.length();
  const double power = grid.dim() + alpha;
  const std::size_t sites = grid.sites();

  // Kernel weights on the offsets of one period, indexed like sites.
  std::vector<double> weight(sites, 0.0);
  auto signed_offset = [N](int i) { return i <= N / 2 ? i : i - N; };
  for (std::size_t o = 1; o < sites; ++o) {
    const auto idx = grid.index(o);
    const double z0 = signed_offset(idx[0]) * h;
    const double z1 = signed_offset(idx[1]) * h;
    weight[o] = grid.dim() == 1 ? periodized_kernel_1d(z0, L, power) : periodized_kernel_2d(z0, z1, L, power);
  }

  // Calibration on the first Fourier mode along axis 0.
  const double xi1 = 2.0 * std::numbers::pi / L;
  double mode_sum = 0.0;
  for (std::size_t o = 1; o < sites; ++o) {
    const double z0 = signed_offset(grid.index(o)[0]) * h;
    mode_sum += (2.0 * std::cos(xi1 * z0) - 2.0) * weight[o];
  }
  const double c = sign * std::pow(xi1, alpha) / mode_sum;
  Field out(grid, f.components());
  for (int comp = 0; comp < f.components(); ++comp) {
    for (std::size_t s = 0; s < sites; ++s) {
      const auto xs = grid.index(s);
      double acc = 0.0;
      for (std::size_t o = 1; o < sites; ++o) {
        const auto zo = grid.index(o);
        acc += weight[o] * (f(grid.site(xs[0] + zo[0], xs[1] + zo[1]), comp) - f(s, comp));
      }
      // the offset set is symmetric, so sum K (f(x+z) + f(x-z) - 2 f(x)) = 2 sum K (f(x+z) - f(x))
      out(s, comp) = c * 2.0 * acc;
    }
  }
  return out;
}

double riesz_kernel_weight(double alpha, Point x, Point eta, const Grid& grid) {
  if (!(alpha > 0.0 && alpha < grid.dim())) throw InvalidArgument("Riesz potential order must lie in (0, n)");
  const double d = periodic_distance(x, eta, grid);
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(d, -grid.dim() + alpha);
}

}  // namespace fracmap
