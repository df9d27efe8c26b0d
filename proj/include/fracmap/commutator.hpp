#pragma once

// The three-term commutator H_a(u, v) = laps(a)(uv) - u laps(a)v - v laps(a)u,
// its lower-order majorant for a in (0, 1), the Lorentz-norm ratio harness
// and the Riesz-transform reduction of a in [1, 2) to a - 1.

#include <array>
#include <cstdint>
#include <vector>

#include "fracmap/frac_calculus.hpp"
#include "fracmap/norms.hpp"
#include "fracmap/torus_field.hpp"

namespace fracmap {

/// Scalar-bilinear commutator. Throws InvalidArgument on grid mismatch or
/// non-scalar inputs.
Field h_alpha(double alpha, const Field& u, const Field& v);

/// One term M o I(s-t) [ I(t)|a| * N o I(alpha-s)|b| ] of the lower-order
/// expansion, with I the nonnegative torus Riesz potential and a, b the
/// order-alpha derivatives of the two arguments.
struct ExpansionTerm {
  double s = 0.0;
  double t = 0.0;
  MultiplierOp outer = MultiplierOp::identity();  // M
  MultiplierOp inner = MultiplierOp::identity();  // N

  /// Throws InvalidArgument unless 0 <= t <= s < alpha.
  void validate(double alpha) const;
  Field evaluate(double alpha, const Field& abs_a, const Field& abs_b) const;
};

/// The admissible window alpha < 2 eps < min(2 alpha, n + alpha).
struct EpsilonWindow {
  double lower;  // exclusive bound on eps
  double upper;  // exclusive bound on eps
  bool contains(double eps) const { return eps > lower && eps < upper; }
};
EpsilonWindow epsilon_window(double alpha, int dim);
/// 0.55 alpha, clamped into the window.
double default_epsilon(double alpha, int dim);

/// The four expansion terms used for alpha in (0, 1):
/// (s,t) = (eps, eps), (alpha-eps, alpha-eps), (eps, alpha-eps), (alpha/2, alpha/2).
std::array<ExpansionTerm, 4> lower_order_terms(double alpha, double eps);

/// Pointwise majorant: sum of the four lower_order_terms evaluated on
/// |laps(alpha) u| and |laps(alpha) v|. Throws InvalidArgument if alpha is not
/// in (0, 1), eps is outside the window (the message names the failed
/// inequality) or u, v are not mean-zero scalar fields.
Field lower_order_bound(double alpha, double eps, const Field& u, const Field& v);

/// max over sites of |h_alpha(u, v)| / majorant (sites with a vanishing
/// majorant and vanishing commutator are skipped; a vanishing majorant under a
/// nonzero commutator yields +infinity).
double pointwise_constant(double alpha, double eps, const Field& u, const Field& v);

/// Lorentz exponents (q, q1, q2) with 1/q = 1/q1 + 1/q2.
struct RatioExponents {
  double q = 1.0;
  double q1 = 2.0;
  double q2 = 2.0;
  void validate() const;
};

/// ||H_a(u,v)||_{(n/a, q)} / (||laps(a)u||_{(n/a, q1)} ||laps(a)v||_{(n/a, q2)}).
/// Returns 0 when the commutator vanishes and +infinity when only the
/// denominator does. Throws InvalidArgument unless alpha in (0, n) and the
/// exponents are consistent.
double commutator_norm_ratio(double alpha, const Field& u, const Field& v, const RatioExponents& exps = {});

struct RatioReport {
  double alpha = 0.0;
  double epsilon = 0.0;  // 0 when no pointwise majorant was involved
  int dim = 1;
  int points = 0;
  std::size_t samples = 0;
  double max_ratio = 0.0;
  std::array<double, 3> quantiles{};  // 0.5, 0.9, 0.99
  std::vector<double> ratios;
};

/// commutator_norm_ratio over `samples` random band-limited mean-zero pairs
/// (modes |k|_inf <= max_mode). Pair i uses seeds derived from (seed, i).
RatioReport commutator_ratio_suite(double alpha, const Grid& grid, std::size_t samples, std::uint64_t seed,
                                   const RatioExponents& exps = {}, int max_mode = 6);

/// Same suite for the pointwise constant of lower_order_bound.
RatioReport pointwise_constant_suite(double alpha, double eps, const Grid& grid, std::size_t samples,
                                     std::uint64_t seed, int max_mode = 6);

/// Pieces of R_i H_{1+a~}(u, v) for a~ = alpha - 1 in [0, 1). With the symbols
/// used here R_i laps(1+a~) = -laps(a~) d_i, so the H and product pieces carry
/// that sign. For a~ = 0 the H and product pieces cancel identically and are
/// returned as zero.
struct ReductionTerms {
  Field h_u_dv;     // -H_{a~}(u, d_i v)
  Field h_v_du;     // -H_{a~}(v, d_i u)
  Field riesz_u;    // -R_i(u laps(alpha) v) + u R_i laps(alpha) v
  Field riesz_v;    // -R_i(v laps(alpha) u) + v R_i laps(alpha) u
  Field prod_v_du;  // -laps(a~) v * d_i u
  Field prod_u_dv;  // -laps(a~) u * d_i v

  Field sum() const;
};

/// Throws InvalidArgument unless alpha in [1, 2) and u, v are scalar mean-zero.
ReductionTerms riesz_reduction_terms(double alpha, int axis, const Field& u, const Field& v);

/// R_i H_alpha(u, v), the left-hand side the reduction pieces sum to.
Field riesz_of_commutator(double alpha, int axis, const Field& u, const Field& v);

}  // namespace fracmap
