#include "fracmap/energy_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracmap/commutator.hpp"
#include "fracmap/error.hpp"
#include "fracmap/fit.hpp"
#include "fracmap/frac_calculus.hpp"
#include "fracmap/localization.hpp"
#include "fracmap/norms.hpp"

namespace fracmap {

void FlowConfig::validate() const {
  if (!(pbar > 1.0 && std::isfinite(pbar))) throw InvalidArgument("pbar must be > 1");
  if (!(tau >= 0.0)) throw InvalidArgument("step size must be >= 0");
  if (eps_reg) {
    if (!(*eps_reg >= 0.0)) throw InvalidArgument("eps_reg must be >= 0");
    if (pbar < 2.0 && *eps_reg == 0.0) throw InvalidArgument("eps_reg must be > 0 when pbar < 2");
  }
  if (!(tolerance > 0.0)) throw InvalidArgument("residual tolerance must be > 0");
}

namespace {

Field lap_bar(const Field& u, const FlowConfig& cfg) { return laps(cfg.alpha_bar(u.grid().dim()), u); }

// (|g|^2 + eps^2)^{power/2} per site, magnitude over components.
Field weight(const Field& g, double eps, double power) {
  Field m = magnitude(g);
  for (double& v : m.values()) v = std::pow(v * v + eps * eps, power / 2.0);
  return m;
}

// Scalar s times each component of the vector field f.
Field scale_components(const Field& s, const Field& f) {
  Field out = f;
  for (std::size_t site = 0; site < f.sites(); ++site)
    for (int c = 0; c < f.components(); ++c) out(site, c) *= s(site);
  return out;
}

void require_sphere_on(const Field& u, const Field& region, double tol, const char* what) {
  for (std::size_t s = 0; s < u.sites(); ++s) {
    if (region(s) == 0.0) continue;
    double sq = 0.0;
    for (int c = 0; c < u.components(); ++c) sq += u(s, c) * u(s, c);
    if (std::abs(std::sqrt(sq) - 1.0) > tol)
      throw InvalidArgument(std::string(what) + ": |u| != 1 at site " + std::to_string(s));
  }
}

double sphere_defect(const Field& u) {
  double worst = 0.0;
  const Field m = magnitude(u);
  for (double v : m.values()) worst = std::max(worst, std::abs(v - 1.0));
  return worst;
}

void require_frame_match(const Field& u, const Frame& frame) {
  if (u.components() != frame.dim()) throw InvalidArgument("frame dimension differs from the target dimension");
}

void require_tests_on_sphere(const Field& u, const std::vector<TestFunction>& tests) {
  for (const auto& t : tests) {
    if (!(t.phi.grid() == u.grid())) throw InvalidArgument("test function lives on another grid");
    Field support = t.phi;
    for (double& v : support.values()) v = v != 0.0 ? 1.0 : 0.0;
    require_sphere_on(u, support, 1e-8, "el_residual");
  }
}

// The field with components (w u)^i = w_ij u^j, times the scalar phi.
Field rotate(const Field& u, const Frame& frame, std::size_t m, const Field* phi = nullptr) {
  const int N = u.components();
  Field out(u.grid(), N);
  for (std::size_t s = 0; s < u.sites(); ++s) {
    const double f = phi ? (*phi)(s) : 1.0;
    for (int i = 0; i < N; ++i) {
      double acc = 0.0;
      for (int j = 0; j < N; ++j) acc += frame.entry(m, i, j) * u(s, j);
      out(s, i) = f * acc;
    }
  }
  return out;
}

void finish(ResidualTable& table) {
  for (const auto& e : table.entries) table.max_abs = std::max(table.max_abs, std::abs(e.value));
}

}  // namespace

double resolve_eps(const Field& u, const FlowConfig& cfg) {
  cfg.validate();
  if (cfg.eps_reg) return *cfg.eps_reg;
  if (cfg.pbar >= 2.0) return 0.0;
  const Field m = magnitude(lap_bar(u, cfg));
  double mean = 0.0;
  for (double v : m.values()) mean += v;
  mean /= static_cast<double>(m.sites());
  return mean > 0.0 ? 1e-6 * mean : 1e-6;
}

double energy(const Field& u, const FlowConfig& cfg) {
  cfg.validate();
  const Field m = magnitude(lap_bar(u, cfg));
  double acc = 0.0;
  for (double v : m.values()) acc += std::pow(v, cfg.pbar);
  return acc * u.grid().cell_volume();
}

double regularized_energy(const Field& u, const FlowConfig& cfg, double eps) {
  cfg.validate();
  const Field w = weight(lap_bar(u, cfg), eps, cfg.pbar);
  double acc = 0.0;
  for (double v : w.values()) acc += v;
  return acc * u.grid().cell_volume();
}

Field energy_gradient(const Field& u, const FlowConfig& cfg, double eps) {
  cfg.validate();
  const Field lu = lap_bar(u, cfg);
  return cfg.pbar * lap_bar(scale_components(weight(lu, eps, cfg.pbar - 2.0), lu), cfg);
}

std::vector<TestFunction> build_test_functions(const Grid& grid, double pbar, int centers,
                                               const std::vector<double>& radii) {
  if (centers < 1) throw InvalidArgument("test function net needs at least one center");
  if (!(pbar > 1.0)) throw InvalidArgument("pbar must be > 1");
  const double L = grid.length();
  const std::vector<double> rs = radii.empty() ? std::vector<double>{L / 16.0, L / 8.0, L / 4.0} : radii;

  std::vector<Point> net;
  if (grid.dim() == 1) {
    for (int i = 0; i < centers; ++i) net.push_back({L * i / centers, 0.0});
  } else {
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(centers)))));
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) net.push_back({L * i / side, L * j / side});
  }

  const double alpha = grid.dim() / pbar;
  std::vector<TestFunction> out;
  for (double r : rs) {
    for (const Point& c : net) {
      Field phi = bump(grid, c, r);
      const double norm = local_lp_norm(laps(alpha, phi), pbar);
      if (!(norm > 0.0)) throw InvalidArgument("test bump is unresolved on this grid");
      phi *= 1.0 / norm;
      out.push_back({c, r, std::move(phi)});
    }
  }
  return out;
}

ResidualTable el_residual(const Field& u, const std::vector<TestFunction>& tests, const Frame& frame,
                          const FlowConfig& cfg) {
  require_frame_match(u, frame);
  require_tests_on_sphere(u, tests);
  const double eps = resolve_eps(u, cfg);
  const Field lu = lap_bar(u, cfg);
  const Field a = scale_components(weight(lu, eps, cfg.pbar - 2.0), lu);
  ResidualTable table;
  for (std::size_t t = 0; t < tests.size(); ++t)
    for (std::size_t m = 0; m < frame.size(); ++m)
      table.entries.push_back({t, m, inner(a, lap_bar(rotate(u, frame, m, &tests[t].phi), cfg))});
  finish(table);
  return table;
}

ResidualTable el_residual_fast(const Field& u, const std::vector<TestFunction>& tests, const Frame& frame,
                               const FlowConfig& cfg) {
  require_frame_match(u, frame);
  require_tests_on_sphere(u, tests);
  const double eps = resolve_eps(u, cfg);
  const Field lu = lap_bar(u, cfg);
  const Field y = lap_bar(scale_components(weight(lu, eps, cfg.pbar - 2.0), lu), cfg);
  std::vector<Field> densities;  // sum_ij w_ij u^j y^i per member
  for (std::size_t m = 0; m < frame.size(); ++m) densities.push_back(dot(y, rotate(u, frame, m)));
  ResidualTable table;
  for (std::size_t t = 0; t < tests.size(); ++t)
    for (std::size_t m = 0; m < frame.size(); ++m) table.entries.push_back({t, m, inner(tests[t].phi, densities[m])});
  finish(table);
  return table;
}

Field normalize(const Field& u) {
  Field out = u;
  for (std::size_t s = 0; s < u.sites(); ++s) {
    double sq = 0.0;
    for (int c = 0; c < u.components(); ++c) sq += u(s, c) * u(s, c);
    if (sq == 0.0) throw InvalidArgument("cannot normalize a zero vector at site " + std::to_string(s));
    const double n = std::sqrt(sq);
    for (int c = 0; c < u.components(); ++c) out(s, c) = u(s, c) / n;
  }
  return out;
}

bool CriticalPointReport::energy_monotone() const {
  for (std::size_t i = 1; i < energy_trace.size(); ++i)
    if (energy_trace[i] > energy_trace[i - 1] * (1.0 + 1e-12)) return false;
  return true;
}

CriticalPointReport constrained_descent(const Field& u0, const FlowConfig& cfg, const std::vector<TestFunction>& tests,
                                        const Frame& frame) {
  cfg.validate();
  require_frame_match(u0, frame);
  const Grid& grid = u0.grid();

  CriticalPointReport rep;
  rep.u = normalize(u0);
  rep.eps_reg = resolve_eps(rep.u, cfg);
  FlowConfig fixed = cfg;
  fixed.eps_reg = rep.eps_reg;
  if (fixed.pbar < 2.0 && rep.eps_reg == 0.0) throw InvalidArgument("eps_reg must be > 0 when pbar < 2");

  const double xi_max = std::sqrt(static_cast<double>(grid.dim())) * std::numbers::pi * grid.points() / grid.length();
  const double tau0 = cfg.tau > 0.0 ? cfg.tau : 1.0 / (cfg.pbar * std::pow(xi_max, 2.0 * cfg.alpha_bar(grid.dim())));
  double tau = tau0;

  double e = regularized_energy(rep.u, fixed, rep.eps_reg);
  rep.energy_trace.push_back(e);
  rep.max_sphere_defect = sphere_defect(rep.u);

  for (;;) {
    const double residual = el_residual_fast(rep.u, tests, frame, fixed).max_abs;
    rep.residual_trace.push_back(residual);
    if (residual <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= cfg.max_iters) break;

    const Field g = energy_gradient(rep.u, fixed, rep.eps_reg);
    const Field tangential = g - scale_components(dot(g, rep.u), rep.u);
    for (;;) {
      Field trial = normalize(rep.u - tau * tangential);
      const double e_trial = regularized_energy(trial, fixed, rep.eps_reg);
      if (e_trial <= e * (1.0 + 1e-12)) {
        rep.u = std::move(trial);
        e = e_trial;
        break;
      }
      tau *= 0.5;
      if (tau < tau0 * 1e-12)
        throw SolverAbort("descent step size underflow after " + std::to_string(rep.iterations) +
                          " steps; energy " + std::to_string(e) + ", residual " + std::to_string(residual));
    }
    ++rep.iterations;
    rep.energy_trace.push_back(e);
    rep.max_sphere_defect = std::max(rep.max_sphere_defect, sphere_defect(rep.u));
    tau = std::min(2.0 * tau, tau0);
  }
  rep.final_tau = tau;
  return rep;
}

LocalizationReport localize(const Field& u, const Field& eta, const FlowConfig& cfg) {
  cfg.validate();
  if (!(eta.grid() == u.grid()) || eta.components() != 1) throw InvalidArgument("cutoff must be scalar on u's grid");
  for (double v : eta.values())
    if (v < 0.0 || v > 1.0) throw InvalidArgument("cutoff must take values in [0, 1]");
  require_sphere_on(u, Field::constant(u.grid(), 1.0), 1e-9, "localize");

  const double a = cfg.alpha_bar(u.grid().dim());
  LocalizationReport rep;
  rep.w = scale_components(eta, u);

  Field comm_w(u.grid(), 1), comm_u(u.grid(), 1);
  for (int i = 0; i < u.components(); ++i) {
    const Field wi = rep.w.component(i);
    const Field ui = u.component(i);
    comm_w += h_alpha(a, wi, wi);
    comm_u += h_alpha(a, ui, ui);
  }
  const Field lhs = dot(rep.w, laps(a, rep.w));
  const Field rhs = -0.5 * comm_w + 0.5 * laps(a, hadamard(eta, eta));
  rep.winsphere_error = max_abs(lhs - rhs);
  rep.threecomm_error = max_abs(comm_u + 2.0 * dot(u, laps(a, u)));
  return rep;
}

SubcriticalTerms subcritical_terms(const Field& u, const Field& eta, const TestFunction& phi, const Frame& frame,
                                   const FlowConfig& cfg) {
  cfg.validate();
  require_frame_match(u, frame);
  const Grid& grid = u.grid();
  if (!(eta.grid() == grid) || !(phi.phi.grid() == grid)) throw InvalidArgument("fields live on different grids");
  const Field inside = ball_mask(phi.center, phi.radius, grid);
  for (std::size_t s = 0; s < grid.sites(); ++s)
    if (inside(s) == 0.0 && phi.phi(s) != 0.0) throw InvalidArgument("test function leaves its declared ball");
  if (!(2.0 * phi.radius <= grid.length() / 2.0)) throw InvalidArgument("B_{2r} exceeds half the torus");
  const Field plateau = ball_mask(phi.center, 2.0 * phi.radius, grid);
  for (std::size_t s = 0; s < grid.sites(); ++s)
    if (plateau(s) != 0.0 && eta(s) < 1.0 - 1e-12) throw InvalidArgument("cutoff is not 1 on B_{2r}");

  const double a = cfg.alpha_bar(grid.dim());
  const double eps = resolve_eps(u, cfg);
  const Field w = scale_components(eta, u);
  const Field lu = laps(a, u);
  const Field lw = laps(a, w);
  const Field au = scale_components(weight(lu, eps, cfg.pbar - 2.0), lu);
  const Field aw = scale_components(weight(lw, eps, cfg.pbar - 2.0), lw);
  const Field diff_a = aw - au;
  const Field diff_w = w - u;
  const Field lphi = laps(a, phi.phi);

  const int N = u.components();
  std::vector<Field> h_diff, h_w;
  for (int j = 0; j < N; ++j) {
    h_diff.push_back(h_alpha(a, diff_w.component(j), phi.phi));
    h_w.push_back(h_alpha(a, w.component(j), phi.phi));
  }

  SubcriticalTerms out;
  const double h = grid.cell_volume();
  for (std::size_t m = 0; m < frame.size(); ++m) {
    double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const int wij = frame.entry(m, i, j);
        if (wij == 0) continue;
        for (std::size_t s = 0; s < grid.sites(); ++s) {
          t1 += wij * diff_a(s, i) * w(s, j) * lphi(s);
          t2 += wij * au(s, i) * diff_w(s, j) * lphi(s);
          t3 += wij * au(s, i) * h_diff[j](s);
          t4 += wij * diff_a(s, i) * h_w[j](s);
        }
      }
    out.I = std::max(out.I, std::abs(t1 * h));
    out.II = std::max(out.II, std::abs(t2 * h));
    out.III = std::max(out.III, std::abs(t3 * h));
    out.IV = std::max(out.IV, std::abs(t4 * h));
  }
  return out;
}

bool SubcriticalSweep::monotone() const {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    const bool larger = radii[i] > radii[i - 1];
    const double prev = terms[i - 1].sum(), cur = terms[i].sum();
    if (larger ? cur < prev : cur > prev) return false;
  }
  return true;
}

SubcriticalSweep subcritical_sweep(const Field& u, const Field& eta, Point center, const std::vector<double>& radii,
                                   const Frame& frame, const FlowConfig& cfg) {
  cfg.validate();
  const Grid& grid = u.grid();
  const double a = cfg.alpha_bar(grid.dim());
  SubcriticalSweep sweep;
  std::vector<double> sums;
  for (double r : radii) {
    Field phi = bump(grid, center, r);
    phi *= 1.0 / local_lp_norm(laps(a, phi), cfg.pbar);
    sweep.radii.push_back(r);
    sweep.terms.push_back(subcritical_terms(u, eta, {center, r, std::move(phi)}, frame, cfg));
    sums.push_back(sweep.terms.back().sum());
  }
  sweep.gamma = loglog_slope(sweep.radii, sums);
  return sweep;
}

namespace {

void check_fit_inputs(const std::vector<double>& radii, const std::vector<Point>& centers) {
  if (radii.size() < 3) throw InvalidArgument("exponent fit needs at least 3 radii");
  if (centers.empty()) throw InvalidArgument("exponent fit needs at least one center");
}

}  // namespace

GrowthReport growth_report(const Field& u, const FlowConfig& cfg, const std::vector<double>& radii,
                           const std::vector<Point>& centers, const Frame& frame) {
  cfg.validate();
  check_fit_inputs(radii, centers);
  const Field lu = lap_bar(u, cfg);
  const SplitReport split =
      pointwise_split(u, lu, frame, 0.0, std::numeric_limits<double>::infinity());

  GrowthReport rep;
  std::vector<double> rs, ms;
  for (double r : radii) {
    GrowthRow row;
    row.radius = r;
    for (const Point& c : centers) {
      const Field mask = ball_mask(c, r, u.grid());
      row.M = std::max(row.M, local_lp_norm(lu, cfg.pbar, mask));
      row.normal = std::max(row.normal, local_lp_norm(split.normal, cfg.pbar, mask));
      row.tangential = std::max(row.tangential, local_lp_norm(split.tangential, cfg.pbar, mask));
    }
    rep.rows.push_back(row);
    rs.push_back(r);
    ms.push_back(row.M);
  }
  rep.delta = loglog_slope(rs, ms);
  return rep;
}

HolderReport holder_estimate(const Field& u, const std::vector<double>& radii, const std::vector<Point>& centers) {
  check_fit_inputs(radii, centers);
  HolderReport rep;
  rep.radii = radii;
  for (double r : radii) {
    double osc = 0.0;
    for (const Point& c : centers) {
      const Field mask = ball_mask(c, r, u.grid());
      for (int comp = 0; comp < u.components(); ++comp) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t s = 0; s < u.sites(); ++s) {
          if (mask(s) == 0.0) continue;
          lo = std::min(lo, u(s, comp));
          hi = std::max(hi, u(s, comp));
        }
        if (hi >= lo) osc = std::max(osc, hi - lo);
      }
    }
    rep.oscillation.push_back(osc);
  }
  rep.gamma = loglog_slope(rep.radii, rep.oscillation);
  if (rep.gamma) {
    double semi = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) semi = std::max(semi, rep.oscillation[i] / std::pow(radii[i], *rep.gamma));
    rep.seminorm = semi;
  }
  return rep;
}

Field identity_map(const Grid& grid) {
  if (grid.dim() != 1) throw InvalidArgument("identity map needs a 1D grid");
  const double k = 2.0 * std::numbers::pi / grid.length();
  return Field::sample(grid, 2, [k](Point x, std::span<double> out) {
    out[0] = std::cos(k * x[0]);
    out[1] = std::sin(k * x[0]);
  });
}

Field perturbed_identity(const Grid& grid, double amplitude, int max_mode, std::uint64_t seed) {
  Field noise = Field::stack(std::vector<Field>{random_band_limited(grid, max_mode, seed),
                                                random_band_limited(grid, max_mode, seed + 1)});
  noise *= 1.0 / max_abs(noise);
  return normalize(identity_map(grid) + amplitude * noise);
}

}  // namespace fracmap
