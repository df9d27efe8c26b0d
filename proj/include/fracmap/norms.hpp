#pragma once

// Local Lebesgue and Lorentz norms of grid fields over masked regions.

#include <limits>
#include <optional>

#include "fracmap/torus_field.hpp"

namespace fracmap {

/// Exponent pair of L^{p,q}; q may be +infinity.
struct LorentzSpec {
  double p = 2.0;
  double q = 2.0;

  /// Throws InvalidArgument unless p in [1, inf) and q in [1, inf].
  void validate() const;
  static LorentzSpec weak(double p) { return {p, std::numeric_limits<double>::infinity()}; }
};

/// (sum over masked cells of |f|^p * cellvol)^{1/p}. Vector fields use the
/// pointwise Euclidean magnitude. Without a mask the whole torus is used.
double local_lp_norm(const Field& f, double p, const std::optional<Field>& mask = std::nullopt);

/// Lorentz norm from the decreasing rearrangement of |f| over the masked
/// cells, each cell a step of width cellvol:
///   q < inf:  ( int_0^inf (t^{1/p} f*(t))^q dt/t )^{1/q}, integrated exactly;
///   q = inf:  sup_t t^{1/p} f*(t).
/// L^{p,p} coincides with local_lp_norm.
double lorentz_norm(const Field& f, const LorentzSpec& spec, const std::optional<Field>& mask = std::nullopt);

}  // namespace fracmap
