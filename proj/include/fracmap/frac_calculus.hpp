#pragma once

// Fractional operators as Fourier multipliers on the torus, plus a
// physical-space singular-integral quadrature used to cross-check them.
//
// Conventions: laps(a) has symbol sign*|xi|^a and lapms(a) has symbol
// sign*|xi|^-a, both zero at xi = 0, so lapms(a) o laps(a) is the identity on
// mean-zero fields for either sign. The default sign -1 makes laps(2) the
// classical Laplacian. riesz(i) has symbol -i xi_i / |xi|.

#include <complex>

#include "fracmap/torus_field.hpp"

namespace fracmap {

inline constexpr double kDefaultSign = -1.0;

enum class OpKind { laps, lapms, riesz, identity };

struct MultiplierOp {
  OpKind kind = OpKind::identity;
  double order = 0.0;  // laps / lapms only
  int axis = 0;        // riesz only
  double sign = kDefaultSign;

  static MultiplierOp laps(double order, double sign = kDefaultSign) { return {OpKind::laps, order, 0, sign}; }
  static MultiplierOp lapms(double order, double sign = kDefaultSign) { return {OpKind::lapms, order, 0, sign}; }
  static MultiplierOp riesz(int axis) { return {OpKind::riesz, 0.0, axis, 1.0}; }
  static MultiplierOp identity() { return {}; }

  /// Symbol at a wave vector (only the first `dim` entries are used).
  std::complex<double> symbol(std::array<double, 2> xi, int dim) const;
  /// True if the symbol is odd in xi (it must vanish on Nyquist bins).
  bool is_odd() const { return kind == OpKind::riesz; }
};

/// Applies a multiplier componentwise. Throws InvalidArgument for a negative
/// order, a riesz axis outside the grid dimension, or non-finite input.
/// lapms and riesz annihilate the mean of the input.
Field apply(const MultiplierOp& op, const Field& f);

/// Convenience wrappers with the default sign.
Field laps(double order, const Field& f);
Field lapms(double order, const Field& f);
Field riesz(int axis, const Field& f);

/// Spectral partial derivative along `axis` (Nyquist bins zeroed).
Field partial(int axis, const Field& f);

/// Riesz potential of order s in (0, n] whose torus kernel is shifted by a
/// constant so that it is pointwise nonnegative; for s = 0 the identity.
/// Unlike lapms it maps nonnegative fields to nonnegative fields.
Field positive_potential(double s, const Field& f);

/// Physical-space quadrature of c * sum_z (f(x+z) + f(x-z) - 2 f(x)) K(z) h^n
/// with K the periodized kernel |z|^{-n-alpha}, summed over one period of
/// lattice offsets. The singular cell z = 0 is dropped (error O(h^{2-alpha})).
/// c is calibrated so the k = 1 mode along the first axis matches laps(alpha).
/// Throws InvalidArgument unless alpha is in (0, 1).
Field laps_quadrature(double alpha, const Field& f, double sign = kDefaultSign);

/// Riesz potential kernel weight periodic_distance(x, eta)^{-n + alpha};
/// +infinity when x == eta. Throws InvalidArgument unless alpha is in (0, n).
double riesz_kernel_weight(double alpha, Point x, Point eta, const Grid& grid);

}  // namespace fracmap
