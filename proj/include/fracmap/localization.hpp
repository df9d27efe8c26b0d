#pragma once

// Dyadic cutoff families on the torus, disjoint-support decay tables and the
// localized commutator estimate.

#include <array>
#include <optional>
#include <vector>

#include "fracmap/norms.hpp"
#include "fracmap/torus_field.hpp"

namespace fracmap {

/// Radial profile 1 - smootherstep((rho - R/2) / (R/2)): equal to 1 on
/// B_{R/2}, 0 outside B_R, C^2 with a quintic transition.
double bump_profile(double rho, double radius);

/// bump_profile of the periodic distance to `center`. Throws InvalidArgument
/// unless 0 < radius <= L/2.
Field bump(const Grid& grid, Point center, double radius);

struct CutoffFamily {
  Point center{};
  double r = 0.0;
  int l_max = 2;
  /// eta[0] = bump(r); eta[1] = bump(4r) - bump(r);
  /// eta[k] = bump(2^{k+1} r) - bump(2^k r) for k >= 2.
  std::vector<Field> eta;
  /// derivative_constants[l - 1] = max_k ||grad^l eta[k]||_inf (2^k r)^l, l = 1..l_max,
  /// measured by centered finite differences.
  std::array<double, 2> derivative_constants{};

  int k_max() const { return static_cast<int>(eta.size()) - 1; }
  /// Sum of all members; equals 1 on B_{2^{k_max} r}.
  Field sum() const;
};

/// Largest k_max with 2^{k_max+1} r <= L/2, or -1 if there is none.
int max_cutoff_level(double r, const Grid& grid);

/// Builds eta[0..k_max]; k_max defaults to max_cutoff_level. Throws
/// InvalidArgument (naming the admissible k_max) if the family would wrap.
CutoffFamily build_cutoffs(Point center, double r, const Grid& grid, std::optional<int> k_max = std::nullopt);

struct DecayRow {
  double d = 0.0;
  double lhs = 0.0;    // sup of |laps(alpha) f| outside B_{r+d}
  double rhs = 0.0;    // ||laps(alpha) f||_q
  double ratio = 0.0;  // lhs / rhs, the empirical C_d (0 when rhs = 0)
};

struct DecayTable {
  double alpha = 0.0;
  double r = 0.0;
  double q = 2.0;
  std::vector<DecayRow> rows;
  bool nonincreasing() const;
  bool strictly_decreasing() const;
  /// Slope of log lhs against log (r + d); nullopt if some lhs vanishes.
  std::optional<double> tail_exponent() const;
};

/// Decay of laps(alpha) f away from a bump supported in B_r(center). Throws
/// InvalidArgument if f does not vanish outside B_r (relative 1e-12), alpha is
/// outside (0, n), some d <= 0 or B_{r+d} exceeds half the torus.
DecayTable disjoint_support_decay(const Field& f, Point center, double r, double alpha, double q,
                                  const std::vector<double>& d_values);

struct LocalizedCommutatorReport {
  double alpha = 0.0;
  double lambda = 0.0;
  double r = 0.0;
  double gamma = 0.0;       // tail decay exponent used for the weights
  double lhs = 0.0;         // ||H(v, w)||_{n/alpha, B_r}
  std::array<double, 4> groups{};
  std::vector<double> tail;  // ||H(v_{-L}, w_{-L,k})||_{B_r} / (||laps v|| ||eta^k laps w||), k = 1..k_max
  double rhs() const { return groups[0] + groups[1] + groups[2] + groups[3]; }
  double ratio() const;
  int dominant_group() const;  // 0-based index of the largest group
};

/// Four-group majorant of ||H(v, w)||_{n/alpha, B_r}:
///   |eta a| |eta b| + L^-g |b| |eta a| + L^-g |a| |eta b| + L^-g |a| sum_k 2^{-k g} |eta^k b|
/// with a = laps(alpha) v, b = laps(alpha) w, eta the cutoffs at radius lambda r
/// and all norms L^{n/alpha}. gamma is fitted from the tail ratios (clamped to
/// >= 0) unless given. Throws InvalidArgument unless lambda > 2, alpha in
/// (0, n) and 4 lambda r <= L/2.
LocalizedCommutatorReport localized_commutator_estimate(const Field& v, const Field& w, double alpha, double lambda,
                                                        double r, Point center,
                                                        std::optional<double> gamma = std::nullopt);

}  // namespace fracmap
