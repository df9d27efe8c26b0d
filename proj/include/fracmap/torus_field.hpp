#pragma once

// Discrete periodic function spaces on the flat torus [0, L)^n, n in {1, 2}.
//
// Fields are stored in physical space, row-major over sites and then
// components (value index = site * components + c). The first axis varies
// slowest, so for n = 2 the site index is i0 * points + i1.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace fracmap {

/// A point of the torus (or of R^n); the second coordinate is ignored for n = 1.
using Point = std::array<double, 2>;

/// Signed integer frequency vector; second entry is 0 for n = 1.
using Frequency = std::array<int, 2>;

class Grid {
 public:
  /// Throws InvalidArgument unless dim is 1 or 2, points >= 8 is even and length > 0.
  Grid(int dim, int points, double length = 2.0 * std::numbers::pi);

  int dim() const { return dim_; }
  int points() const { return points_; }
  double length() const { return length_; }

  std::size_t sites() const;
  double spacing() const { return length_ / points_; }
  double cell_volume() const;

  Point coordinate(std::size_t site) const;
  std::array<int, 2> index(std::size_t site) const;
  /// Site for an index vector; indices are wrapped periodically.
  std::size_t site(int i0, int i1 = 0) const;

  /// Frequency represented by a DFT bin (bins use FFT ordering).
  Frequency frequency(std::size_t bin) const;
  /// Physical wave vector 2*pi*k / L of a bin.
  std::array<double, 2> wavevector(std::size_t bin) const;
  /// True if any axis of the bin sits on the Nyquist frequency points / 2.
  bool is_nyquist(std::size_t bin, int axis) const;
  /// Bin of a frequency vector (|k_i| <= points / 2).
  std::size_t bin(Frequency k) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  int points_;
  double length_;
};

class Field {
 public:
  Field(Grid grid, int components);
  /// Throws InvalidArgument on a size mismatch or non-finite entries.
  Field(Grid grid, int components, std::vector<double> values);

  /// Samples a scalar function at the grid sites.
  static Field sample(const Grid& grid, const std::function<double(Point)>& fn);
  /// Samples a vector function (fn writes `components` values).
  static Field sample(const Grid& grid, int components,
                      const std::function<void(Point, std::span<double>)>& fn);
  static Field constant(const Grid& grid, double value, int components = 1);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t sites() const { return grid_.sites(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator()(std::size_t site, int c = 0) const { return values_[site * components_ + c]; }
  double& operator()(std::size_t site, int c = 0) { return values_[site * components_ + c]; }

  /// Scalar field holding component c.
  Field component(int c) const;
  /// Stacks scalar fields into one multi-component field.
  static Field stack(std::span<const Field> parts);

  bool all_finite() const;
  double mean(int c = 0) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid grid_;
  int components_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product of two fields with equal shape.
Field hadamard(const Field& a, const Field& b);
/// Pointwise |f| (componentwise).
Field abs(const Field& f);
/// Pointwise Euclidean norm across components (scalar result).
Field magnitude(const Field& f);
/// Pointwise dot product across components (scalar result).
Field dot(const Field& a, const Field& b);
/// Sum over sites and components of a*b times the cell volume.
double inner(const Field& a, const Field& b);
double l2_norm(const Field& f);
double max_abs(const Field& f);

class FrequencyField {
 public:
  FrequencyField(Grid grid, int components);
  FrequencyField(Grid grid, int components, std::vector<std::complex<double>> coefficients);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }

  std::span<const std::complex<double>> coefficients() const { return coeffs_; }
  std::span<std::complex<double>> coefficients() { return coeffs_; }

  std::complex<double> operator()(std::size_t bin, int c = 0) const { return coeffs_[bin * components_ + c]; }
  std::complex<double>& operator()(std::size_t bin, int c = 0) { return coeffs_[bin * components_ + c]; }

  std::complex<double> at(Frequency k, int c = 0) const { return (*this)(grid_.bin(k), c); }

  /// Largest |F(k) - conj(F(-k))| over all bins and components.
  double symmetry_defect() const;

 private:
  Grid grid_;
  int components_;
  std::vector<std::complex<double>> coeffs_;
};

/// Normalized DFT: coefficient(k) = mean over sites of f(x) exp(-i xi_k . x).
/// A constant c maps to c at k = 0 and cos(3x) to 1/2 at k = +-3.
FrequencyField to_frequency(const Field& f);

/// Inverse of to_frequency. Throws InvalidArgument if the coefficients are not
/// conjugate symmetric to 1e-10 (relative to the largest coefficient, floor 1).
Field to_field(const FrequencyField& F);

/// Torus metric: per-axis min(|d|, L - |d|), combined Euclidean.
double periodic_distance(Point x, Point y, const Grid& grid);

/// 0/1 indicator of the open ball {periodic_distance(., center) < r}.
/// Throws InvalidArgument unless 0 < r <= L/2.
Field ball_mask(Point center, double r, const Grid& grid);

/// Mean-zero random field with Gaussian Fourier coefficients on the modes
/// 0 < |k|_inf <= max_mode, amplitude decaying like (1 + |k|)^-decay.
/// The coefficients are drawn in a grid-independent order, so the same seed
/// gives samples of the same continuum function on every grid that resolves it.
Field random_band_limited(const Grid& grid, int max_mode, std::uint64_t seed, double decay = 1.0);

}  // namespace fracmap
