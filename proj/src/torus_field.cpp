#include "fracmap/torus_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fft.hpp"
#include "fracmap/error.hpp"
#include "fracmap/random.hpp"

namespace fracmap {

Grid::Grid(int dim, int points, double length) : dim_(dim), points_(points), length_(length) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
  if (points < 8 || points % 2 != 0)
    throw InvalidArgument("points per axis must be an even number >= 8, got " + std::to_string(points));
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("grid length must be positive and finite");
}

std::size_t Grid::sites() const {
  return dim_ == 1 ? static_cast<std::size_t>(points_) : static_cast<std::size_t>(points_) * points_;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::array<int, 2> Grid::index(std::size_t site) const {
  if (dim_ == 1) return {static_cast<int>(site), 0};
  return {static_cast<int>(site / points_), static_cast<int>(site % points_)};
}

Point Grid::coordinate(std::size_t site) const {
  const auto idx = index(site);
  return {idx[0] * spacing(), dim_ == 2 ? idx[1] * spacing() : 0.0};
}

std::size_t Grid::site(int i0, int i1) const {
  auto wrap = [this](int i) { return static_cast<std::size_t>(((i % points_) + points_) % points_); };
  if (dim_ == 1) return wrap(i0);
  return wrap(i0) * points_ + wrap(i1);
}

Frequency Grid::frequency(std::size_t bin) const {
  const auto idx = index(bin);
  auto signed_k = [this](int i) { return i <= points_ / 2 ? i : i - points_; };
  return {signed_k(idx[0]), dim_ == 2 ? signed_k(idx[1]) : 0};
}

std::array<double, 2> Grid::wavevector(std::size_t bin) const {
  const auto k = frequency(bin);
  const double scale = 2.0 * std::numbers::pi / length_;
  return {scale * k[0], scale * k[1]};
}

bool Grid::is_nyquist(std::size_t bin, int axis) const { return index(bin)[axis] == points_ / 2; }

std::size_t Grid::bin(Frequency k) const { return site(k[0], dim_ == 2 ? k[1] : 0); }

// ---------------------------------------------------------------------------

Field::Field(Grid grid, int components) : grid_(grid), components_(components) {
  if (components < 1) throw InvalidArgument("a field needs at least one component");
  values_.assign(grid_.sites() * components_, 0.0);
}

Field::Field(Grid grid, int components, std::vector<double> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
  if (components < 1) throw InvalidArgument("a field needs at least one component");
  if (values_.size() != grid_.sites() * components_)
    throw InvalidArgument("field value count " + std::to_string(values_.size()) + " does not match grid sites x components " +
                          std::to_string(grid_.sites() * components_));
  if (!all_finite()) throw InvalidArgument("field values must be finite");
}

Field Field::sample(const Grid& grid, const std::function<double(Point)>& fn) {
  Field f(grid, 1);
  for (std::size_t s = 0; s < grid.sites(); ++s) f(s) = fn(grid.coordinate(s));
  if (!f.all_finite()) throw InvalidArgument("sampled function produced non-finite values");
  return f;
}

Field Field::sample(const Grid& grid, int components, const std::function<void(Point, std::span<double>)>& fn) {
  Field f(grid, components);
  for (std::size_t s = 0; s < grid.sites(); ++s)
    fn(grid.coordinate(s), f.values().subspan(s * components, components));
  if (!f.all_finite()) throw InvalidArgument("sampled function produced non-finite values");
  return f;
}

Field Field::constant(const Grid& grid, double value, int components) {
  return Field(grid, components, std::vector<double>(grid.sites() * components, value));
}

Field Field::component(int c) const {
  if (c < 0 || c >= components_) throw InvalidArgument("component index out of range");
  Field out(grid_, 1);
  for (std::size_t s = 0; s < sites(); ++s) out(s) = (*this)(s, c);
  return out;
}

Field Field::stack(std::span<const Field> parts) {
  if (parts.empty()) throw InvalidArgument("cannot stack zero fields");
  const Grid& grid = parts.front().grid();
  int total = 0;
  for (const auto& p : parts) {
    if (!(p.grid() == grid)) throw InvalidArgument("grid mismatch while stacking fields");
    total += p.components();
  }
  Field out(grid, total);
  int offset = 0;
  for (const auto& p : parts) {
    for (std::size_t s = 0; s < grid.sites(); ++s)
      for (int c = 0; c < p.components(); ++c) out(s, offset + c) = p(s, c);
    offset += p.components();
  }
  return out;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::mean(int c) const {
  double sum = 0.0;
  for (std::size_t s = 0; s < sites(); ++s) sum += (*this)(s, c);
  return sum / static_cast<double>(sites());
}

namespace {
void require_same_shape(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("grid mismatch");
  if (a.components() != b.components()) throw InvalidArgument("component count mismatch");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
  require_same_shape(a, b);
  Field out = a;
  auto vals = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= bv[i];
  return out;
}

Field abs(const Field& f) {
  Field out = f;
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

Field magnitude(const Field& f) {
  Field out(f.grid(), 1);
  for (std::size_t s = 0; s < f.sites(); ++s) {
    double sq = 0.0;
    for (int c = 0; c < f.components(); ++c) sq += f(s, c) * f(s, c);
    out(s) = std::sqrt(sq);
  }
  return out;
}

Field dot(const Field& a, const Field& b) {
  require_same_shape(a, b);
  Field out(a.grid(), 1);
  for (std::size_t s = 0; s < a.sites(); ++s) {
    double acc = 0.0;
    for (int c = 0; c < a.components(); ++c) acc += a(s, c) * b(s, c);
    out(s) = acc;
  }
  return out;
}

double inner(const Field& a, const Field& b) {
  require_same_shape(a, b);
  double acc = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
  return acc * a.grid().cell_volume();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

FrequencyField::FrequencyField(Grid grid, int components) : grid_(grid), components_(components) {
  if (components < 1) throw InvalidArgument("a frequency field needs at least one component");
  coeffs_.assign(grid_.sites() * components_, {0.0, 0.0});
}

FrequencyField::FrequencyField(Grid grid, int components, std::vector<std::complex<double>> coefficients)
    : grid_(grid), components_(components), coeffs_(std::move(coefficients)) {
  if (components < 1) throw InvalidArgument("a frequency field needs at least one component");
  if (coeffs_.size() != grid_.sites() * components_) throw InvalidArgument("coefficient count mismatch");
}

double FrequencyField::symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t b = 0; b < grid_.sites(); ++b) {
    const auto k = grid_.frequency(b);
    const std::size_t mirror = grid_.bin({-k[0], -k[1]});
    for (int c = 0; c < components_; ++c)
      worst = std::max(worst, std::abs((*this)(b, c) - std::conj((*this)(mirror, c))));
  }
  return worst;
}

FrequencyField to_frequency(const Field& f) {
  const Grid& grid = f.grid();
  const std::size_t n = grid.sites();
  FrequencyField out(grid, f.components());
  std::vector<std::complex<double>> buf(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (int c = 0; c < f.components(); ++c) {
    for (std::size_t s = 0; s < n; ++s) buf[s] = {f(s, c), 0.0};
    detail::fft(grid, buf, detail::FftDirection::forward);
    for (std::size_t b = 0; b < n; ++b) out(b, c) = buf[b] * scale;
  }
  return out;
}

Field to_field(const FrequencyField& F) {
  const Grid& grid = F.grid();
  double scale = 1.0;
  for (const auto& z : F.coefficients()) scale = std::max(scale, std::abs(z));
  const double defect = F.symmetry_defect();
  if (!(defect <= 1e-10 * scale))
    throw InvalidArgument("frequency data is not conjugate symmetric (defect " + std::to_string(defect) + ")");

  const std::size_t n = grid.sites();
  Field out(grid, F.components());
  std::vector<std::complex<double>> buf(n);
  for (int c = 0; c < F.components(); ++c) {
    for (std::size_t b = 0; b < n; ++b) buf[b] = F(b, c);
    detail::fft(grid, buf, detail::FftDirection::backward);
    for (std::size_t s = 0; s < n; ++s) out(s, c) = buf[s].real();
  }
  return out;
}

double periodic_distance(Point x, Point y, const Grid& grid) {
  const double L = grid.length();
  double sq = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    double d = std::fmod(std::abs(x[a] - y[a]), L);
    d = std::min(d, L - d);
    sq += d * d;
  }
  return std::sqrt(sq);
}

Field ball_mask(Point center, double r, const Grid& grid) {
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (r > grid.length() / 2.0) throw InvalidArgument("ball radius exceeds half the period; the ball would wrap onto itself");
  Field mask(grid, 1);
  for (std::size_t s = 0; s < grid.sites(); ++s)
    mask(s) = periodic_distance(grid.coordinate(s), center, grid) < r ? 1.0 : 0.0;
  return mask;
}

Field random_band_limited(const Grid& grid, int max_mode, std::uint64_t seed, double decay) {
  if (max_mode < 1 || max_mode >= grid.points() / 2)
    throw InvalidArgument("band limit must lie in [1, points/2)");
  SplitMix64 rng(seed);
  std::normal_distribution<double> normal;
  FrequencyField F(grid, 1);
  // Half-space enumeration: k0 > 0, or k0 == 0 and k1 > 0.
  const int k1_max = grid.dim() == 2 ? max_mode : 0;
  for (int k0 = 0; k0 <= max_mode; ++k0) {
    for (int k1 = -k1_max; k1 <= k1_max; ++k1) {
      if (k0 == 0 && k1 <= 0) continue;
      const double amp = std::pow(1.0 + std::hypot(k0, k1), -decay);
      const std::complex<double> z(amp * normal(rng), amp * normal(rng));
      F(grid.bin({k0, k1})) = z;
      F(grid.bin({-k0, -k1})) = std::conj(z);
    }
  }
  return to_field(F);
}

}  // namespace fracmap
