#pragma once

// Sphere-valued critical points of E(u) = int |laps(a) u|^p with a = n / p:
// energy and gradient, the weak Euler-Lagrange residual, projected descent,
// the cutoff localization w = eta u and growth / Hoelder diagnostics.

#include <cstdint>
#include <optional>
#include <vector>

#include "fracmap/sphere_frame.hpp"
#include "fracmap/torus_field.hpp"

namespace fracmap {

struct FlowConfig {
  double pbar = 2.0;
  double tau = 0.0;  // initial step; 0 picks 1 / (pbar * xi_max^{2 alpha_bar})
  /// Regularizer of the weight |laps u|^{p-2}. Unset: 0 for pbar >= 2,
  /// otherwise 1e-6 * mean |laps u| of the field it is resolved against.
  std::optional<double> eps_reg;
  std::size_t max_iters = 10000;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;

  double alpha_bar(int dim) const { return dim / pbar; }
  /// Throws InvalidArgument unless pbar > 1, tau >= 0, eps_reg >= 0 (> 0 when
  /// pbar < 2 and set) and tolerance > 0.
  void validate() const;
};

/// eps_reg of cfg, or its default for the field u.
double resolve_eps(const Field& u, const FlowConfig& cfg);

/// sum |laps(a) u|^pbar * cellvol, with the magnitude taken across components.
double energy(const Field& u, const FlowConfig& cfg);
/// sum (|laps(a) u|^2 + eps^2)^{pbar/2} * cellvol.
double regularized_energy(const Field& u, const FlowConfig& cfg, double eps);
/// L^2 gradient of regularized_energy: pbar laps(a)[(|laps u|^2 + eps^2)^{(pbar-2)/2} laps u].
Field energy_gradient(const Field& u, const FlowConfig& cfg, double eps);

struct TestFunction {
  Point center{};
  double radius = 0.0;
  Field phi;  // bump(center, radius) scaled so that ||laps(a) phi||_pbar = 1
};

/// Bumps at a net of `centers` points (equispaced in 1D, a square net in 2D)
/// for each radius. Throws InvalidArgument for an empty net or a radius
/// outside (0, L/2].
std::vector<TestFunction> build_test_functions(const Grid& grid, double pbar, int centers = 16,
                                               const std::vector<double>& radii = {});

struct ResidualEntry {
  std::size_t test = 0;
  std::size_t omega = 0;
  double value = 0.0;
};

struct ResidualTable {
  std::vector<ResidualEntry> entries;
  double max_abs = 0.0;
};

/// R(phi, w) = int W laps(a) u^i laps(a)(w_ij u^j phi), W = (|laps u|^2 + eps^2)^{(pbar-2)/2},
/// evaluated directly for every test function and frame member. Throws
/// InvalidArgument if |u| deviates from 1 by more than 1e-8 on a test support.
ResidualTable el_residual(const Field& u, const std::vector<TestFunction>& tests, const Frame& frame,
                          const FlowConfig& cfg);
/// Same values through the adjoint: R = int phi w_ij u^j laps(a)(W laps(a) u)^i.
ResidualTable el_residual_fast(const Field& u, const std::vector<TestFunction>& tests, const Frame& frame,
                               const FlowConfig& cfg);

struct CriticalPointReport {
  Field u{Grid(1, 8), 2};
  std::vector<double> energy_trace;    // regularized energy after each accepted step (index 0: start)
  std::vector<double> residual_trace;  // max |R| at each residual check
  std::size_t iterations = 0;          // accepted descent steps
  bool converged = false;
  double eps_reg = 0.0;
  double final_tau = 0.0;
  double max_sphere_defect = 0.0;      // max over iterates of max ||u| - 1|
  /// Energy trace nonincreasing up to a relative 1e-12 per step.
  bool energy_monotone() const;
};

/// Projected gradient descent u <- normalize(u - tau (g - (g.u) u)) with
/// backtracking (tau halves while the regularized energy increases by more
/// than 1e-12 relative). Stops once el_residual_fast <= cfg.tolerance or after
/// cfg.max_iters steps. Throws SolverAbort when tau underflows.
CriticalPointReport constrained_descent(const Field& u0, const FlowConfig& cfg, const std::vector<TestFunction>& tests,
                                        const Frame& frame);

/// Pointwise renormalization u / |u|. Throws InvalidArgument on a zero vector.
Field normalize(const Field& u);

struct LocalizationReport {
  Field w{Grid(1, 8), 2};
  double winsphere_error = 0.0;   // max |w.laps w + (1/2) sum H(w^i, w^i) - (1/2) laps(eta^2)|
  double threecomm_error = 0.0;   // max |sum H(u^i, u^i) + 2 u.laps u|
};

/// w = eta u and the two pointwise identities behind the orthogonal part.
/// Throws InvalidArgument if eta leaves [0, 1] or |u| deviates from 1 by more than 1e-9.
LocalizationReport localize(const Field& u, const Field& eta, const FlowConfig& cfg);

struct SubcriticalTerms {
  double I = 0.0, II = 0.0, III = 0.0, IV = 0.0;  // max over frame members of |term|
  double sum() const { return I + II + III + IV; }
};

/// The four difference terms of the localized equation for w = eta u against
/// one test function. Throws InvalidArgument unless phi vanishes outside
/// B_r(center) and eta == 1 on B_{2r}(center).
SubcriticalTerms subcritical_terms(const Field& u, const Field& eta, const TestFunction& phi, const Frame& frame,
                                   const FlowConfig& cfg);

struct SubcriticalSweep {
  std::vector<double> radii;
  std::vector<SubcriticalTerms> terms;
  std::optional<double> gamma;  // slope of log sum against log r
  bool monotone() const;        // sums increase with r
};

/// subcritical_terms for normalized bumps of each radius at one center.
SubcriticalSweep subcritical_sweep(const Field& u, const Field& eta, Point center, const std::vector<double>& radii,
                                   const Frame& frame, const FlowConfig& cfg);

struct GrowthRow {
  double radius = 0.0;
  double M = 0.0;           // max over centers of ||laps(a) u||_{pbar, B_r}
  double normal = 0.0;      // max over centers of ||u . laps(a) u||_{pbar, B_r}
  double tangential = 0.0;  // max over centers of ||sum_w |<u_w, laps(a) u>| ||_{pbar, B_r}
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  std::optional<double> delta;  // nullopt (flagged) when some M vanishes
};

/// Throws InvalidArgument for fewer than 3 radii or no centers.
GrowthReport growth_report(const Field& u, const FlowConfig& cfg, const std::vector<double>& radii,
                           const std::vector<Point>& centers, const Frame& frame);

struct HolderReport {
  std::vector<double> radii;
  std::vector<double> oscillation;  // max over centers and components of max - min on B_r
  std::optional<double> gamma;      // nullopt (flagged) for a locally constant field
  std::optional<double> seminorm;   // max osc(r) / r^gamma
};

/// Throws InvalidArgument for fewer than 3 radii or no centers.
HolderReport holder_estimate(const Field& u, const std::vector<double>& radii, const std::vector<Point>& centers);

/// The identity map of the circle (cos x, sin x) on a 1D grid of length 2 pi.
Field identity_map(const Grid& grid);

/// normalize(identity_map + amplitude * noise) with band-limited noise scaled to max |noise| = 1.
Field perturbed_identity(const Grid& grid, double amplitude, int max_mode, std::uint64_t seed);

}  // namespace fracmap
