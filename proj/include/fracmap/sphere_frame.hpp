#pragma once

// Antisymmetric frames of R^N: the set of antisymmetric matrices with entries
// in {-1, 0, 1}, the frame vectors p_w = w p, and the two-sided bound
//
//   c |q| <= sum_w |<p_w, q>| + |<p, q>| <= C |q|    for unit p.

#include <cstdint>
#include <optional>
#include <vector>

#include "fracmap/torus_field.hpp"

namespace fracmap {

class Frame {
 public:
  /// Empty frame of dimension N (no matrices).
  explicit Frame(int N);

  int dim() const { return N_; }
  std::size_t size() const { return upper_.size() / pairs(); }
  /// Number of strictly upper entries N(N-1)/2.
  std::size_t pairs() const { return static_cast<std::size_t>(N_ * (N_ - 1) / 2); }

  /// Entry w_ij of member m (antisymmetric by construction).
  int entry(std::size_t m, int i, int j) const;
  /// Appends a member given by its strictly upper entries in row-major order.
  void add(const std::vector<int>& upper);

  /// <p_w, q> = sum_ij q_i w_ij p_j.
  double pairing(std::size_t m, const double* p, const double* q) const;
  /// sum_w |<p_w, q>|.
  double frame_sum(const double* p, const double* q) const;
  /// max_w |<p_w, q>|.
  double frame_max(const double* p, const double* q) const;

 private:
  friend Frame enumerate_frame(int N);

  int N_;
  bool complete_ = false;  // all 3^{N(N-1)/2} members in enumeration order
  std::vector<signed char> upper_;
};

/// All 3^{N(N-1)/2} members. Throws InvalidArgument unless 2 <= N <= 5.
Frame enumerate_frame(int N);
/// The N(N-1)/2 elementary members e_a e_b^T - e_b e_a^T, a < b (any N >= 2).
Frame elementary_frame(int N);

/// 0.9 c0^4 / N with c0 = 1 / (2 sqrt(N - 1)).
double c_proof(int N);

struct FrameConstants {
  int N = 2;
  std::size_t omega_count = 0;
  std::size_t samples = 0;
  double c_emp = 0.0;       // min of the frame bound over sampled unit (p, q)
  double C_emp = 0.0;       // max over sampled unit (p, q)
  double c_perp_emp = 0.0;  // min of sum_w |<p_w, q>| over sampled q orthogonal to p
  double G_perp_emp = 0.0;  // max of the same
  std::optional<double> c_perp_mesh;  // deterministic mesh (N = 2, 3)
  std::optional<double> G_perp_mesh;
  double c_proof = 0.0;
  /// Constants for pointwise checks: min(1, c_perp) and sqrt(1 + G_perp^2),
  /// using the mesh values where available.
  double lower() const;
  double upper() const;
  /// c_perp (mesh if available, otherwise sampled) >= c_proof.
  bool meets_proof_floor() const;
};

/// Throws InvalidArgument unless 2 <= N <= 5 and samples >= 10^4; throws
/// Falsification if some sample gives a zero frame bound.
FrameConstants frame_bound_constants(int N, std::size_t samples, std::uint64_t seed);

struct ThetaReport {
  int N = 2;
  double theta_emp = 0.0;
  double paper_theta = 0.0;  // 1 / (|Omega| + 1)
  bool meets_theta_formula() const { return theta_emp >= paper_theta; }
};

/// min over sampled unit (p, q) of max(max_w |<p_w, q>|, |<p, q>|).
ThetaReport theta_dichotomy(int N, std::size_t samples, std::uint64_t seed);

struct SplitReport {
  Field normal;      // u . g
  Field tangential;  // sum_w |<u_w, g>|
  double worst_lower = 0.0;  // min over sites of (|u.g| + tangential) / |g|
  double worst_upper = 0.0;  // max of the same
  std::size_t checked_sites = 0;
};

/// Sitewise split of g along u and the frame vectors u_w = w u. Throws
/// InvalidArgument if |u| deviates from 1 by more than 1e-9 (naming the worst
/// site) or the shapes disagree; throws Falsification if
/// lower |g| <= |u.g| + sum_w |<u_w, g>| <= upper |g| fails at some site
/// (relative tolerance 1e-9).
SplitReport pointwise_split(const Field& u, const Field& g, const Frame& frame, double lower, double upper);

}  // namespace fracmap
