#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "fracmap/error.hpp"
#include "fracmap/field_io.hpp"
#include "fracmap/frac_calculus.hpp"
#include "fracmap/random.hpp"
#include "fracmap/svg_plot.hpp"

namespace fracmap::cli {

ExperimentConfig::ExperimentConfig(const Overrides& o) {
  values_ = Json::object();
  if (o.config) {
    std::ifstream in(*o.config);
    if (!in) throw InvalidArgument("cannot read config file " + *o.config);
    try {
      values_ = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!values_.is_object()) throw InvalidArgument("config file must hold a JSON object");
  }
  if (o.seed) values_["seed"] = *o.seed;
  if (o.out) values_["out"] = *o.out;
  if (o.grid) values_["grid"] = *o.grid;
  if (o.pbar) values_["pbar"] = *o.pbar;
  if (o.alpha) values_["alpha"] = *o.alpha;
  if (o.epsilon) values_["epsilon"] = *o.epsilon;
  if (o.lambda) values_["lambda"] = *o.lambda;
  if (o.samples) values_["samples"] = *o.samples;
}

double ExperimentConfig::number(const std::string& key, double fallback) {
  double v = fallback;
  if (has(key)) {
    if (!values_[key].is_number()) throw InvalidArgument("config key '" + key + "' must be a number");
    v = values_[key].get<double>();
  }
  used_[key] = v;
  return v;
}

long long ExperimentConfig::integer(const std::string& key, long long fallback) {
  long long v = fallback;
  if (has(key)) {
    if (!values_[key].is_number_integer()) throw InvalidArgument("config key '" + key + "' must be an integer");
    v = values_[key].get<long long>();
  }
  used_[key] = v;
  return v;
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) {
  std::string v = fallback;
  if (has(key)) {
    if (!values_[key].is_string()) throw InvalidArgument("config key '" + key + "' must be a string");
    v = values_[key].get<std::string>();
  }
  if (key != "out") used_[key] = v;
  return v;
}

Json ExperimentConfig::list(const std::string& key, const Json& fallback) {
  Json v = has(key) ? values_[key] : fallback;
  if (!v.is_array()) throw InvalidArgument("config key '" + key + "' must be a list");
  used_[key] = v;
  return v;
}

double ExperimentConfig::required_number(const std::string& key) {
  if (!has(key)) throw InvalidArgument("missing config key '" + key + "'");
  return number(key, 0.0);
}

namespace {

std::vector<double> numbers_of(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidArgument("list entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void write_report(const std::filesystem::path& out, const std::string& command, const ExperimentConfig& cfg,
                  Json results) {
  Json report = {{"command", command},
                 {"seed", cfg.used().value("seed", 1)},
                 {"config", cfg.used()},
                 {"input_hash", content_hash(cfg.used().dump())},
                 {"results", std::move(results)}};
  write_json(out / "report.json", report);
}

std::vector<Point> net(const Grid& grid, int count) {
  std::vector<Point> pts;
  const double L = grid.length();
  if (grid.dim() == 1) {
    for (int i = 0; i < count; ++i) pts.push_back({L * (i + 0.5) / count, 0.0});
  } else {
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(count)))));
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) pts.push_back({L * (i + 0.5) / side, L * (j + 0.5) / side});
  }
  return pts;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

int verify_kernel(ExperimentConfig& cfg) {
  std::vector<double> alphas;
  if (cfg.has("alpha")) alphas = {cfg.number("alpha", 0.5)};
  else alphas = numbers_of(cfg.list("alphas", Json::array({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9})));
  const bool fixed_eps = cfg.has("epsilon");
  const double eps_value = fixed_eps ? cfg.number("epsilon", 0.0) : 0.0;
  const auto dim = static_cast<int>(cfg.integer("dim", 1));
  const long long samples = cfg.integer("samples", 100000);
  const double box = cfg.number("box", 10.0);
  const auto seed = cfg.seed();
  const auto out = cfg.out();

  std::vector<SearchConfig> runs;
  for (double a : alphas) {
    SearchConfig sc;
    sc.alpha = a;
    sc.epsilon = fixed_eps ? eps_value : 0.7 * a;
    sc.dim = dim;
    sc.samples = static_cast<std::size_t>(std::max(0LL, samples));
    sc.seed = seed;
    sc.box = box;
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
    if (!(sc.epsilon > 0.0 && sc.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (dim != 1 && dim != 2) throw InvalidArgument("dim must be 1 or 2");
    if (samples < 1000) throw InvalidArgument("samples must be >= 1000");
    if (!(box > 0.0)) throw InvalidArgument("box must be positive");
    runs.push_back(sc);
  }

  Json results = Json::array();
  std::vector<std::vector<double>> rows;
  std::vector<double> cs;
  for (const auto& sc : runs) {
    try {
      const SearchResult r = constant_search(sc);
      Json j = to_json(r);
      std::optional<double> coarse;
      if (sc.samples / 10 >= 1000) {
        SearchConfig small = sc;
        small.samples = sc.samples / 10;
        coarse = constant_search(small).c_emp;
        j["c_emp_tenth_samples"] = *coarse;
        j["stability"] = std::abs(r.c_emp / *coarse - 1.0);
      }
      results.push_back(j);
      cs.push_back(r.c_emp);
      rows.push_back({sc.alpha, sc.epsilon, static_cast<double>(sc.dim), static_cast<double>(sc.samples), r.c_emp,
                      coarse.value_or(std::nan("")), r.mvt_constant, r.chi1_ratio_min, r.chi1_ratio_max,
                      static_cast<double>(r.skipped)});
      std::cout << "alpha=" << sc.alpha << " epsilon=" << sc.epsilon << " C_emp=" << r.c_emp << '\n';
    } catch (const Falsification& f) {
      std::cerr << "FALSIFIED at alpha=" << sc.alpha << " epsilon=" << sc.epsilon << ": " << f.what() << '\n'
                << "witness: " << f.witness() << '\n';
      results.push_back({{"alpha", sc.alpha}, {"epsilon", sc.epsilon}, {"falsified", true},
                         {"witness", Json::parse(f.witness())}});
      write_report(out, "verify-kernel", cfg, {{"runs", results}, {"falsified", true}});
      return kExitFalsified;
    }
  }

  const double spread = cs.empty() ? 0.0 : *std::max_element(cs.begin(), cs.end()) / median(cs);
  write_report(out, "verify-kernel", cfg,
               {{"runs", results}, {"falsified", false}, {"uniformity_max_over_median", spread},
                {"uniformity_within_factor_3", spread <= 3.0}});
  write_csv(out / "tables" / "kernel.csv",
            {"alpha", "epsilon", "dim", "samples", "c_emp", "c_emp_tenth_samples", "mvt_constant", "chi1_ratio_min",
             "chi1_ratio_max", "skipped"},
            rows);
  write_line_plot(out / "plots" / "kernel_constants.svg", {"Empirical kernel constant", "alpha", "C_emp"},
                  {{"C_emp", alphas, cs}});
  return kExitOk;
}

int verify_frame(ExperimentConfig& cfg) {
  const auto N = static_cast<int>(cfg.integer("N", 2));
  const long long samples = cfg.integer("samples", 10000);
  const auto seed = cfg.seed();
  const auto out = cfg.out();
  if (N < 2 || N > 5) throw InvalidArgument("N must lie in [2, 5]");
  if (samples < 10000) throw InvalidArgument("samples must be >= 10^4");

  FrameConstants c;
  try {
    c = frame_bound_constants(N, static_cast<std::size_t>(samples), seed);
  } catch (const Falsification& f) {
    std::cerr << "FALSIFIED: " << f.what() << "\nwitness: " << f.witness() << '\n';
    write_report(out, "verify-frame", cfg, {{"falsified", true}, {"witness", Json::parse(f.witness())}});
    return kExitFalsified;
  }
  const ThetaReport t = theta_dichotomy(N, static_cast<std::size_t>(samples), seed);
  Json j = to_json(c, t);
  j["omega_count_closed_form"] = std::pow(3.0, N * (N - 1) / 2);
  j["lower_constant"] = c.lower();
  j["upper_constant"] = c.upper();
  write_report(out, "verify-frame", cfg, j);
  write_csv(out / "tables" / "frame.csv",
            {"N", "omega_count", "c_emp", "C_emp", "c_perp", "theta_emp", "paper_theta", "c_proof"},
            {{static_cast<double>(N), static_cast<double>(c.omega_count), c.c_emp, c.C_emp,
              c.c_perp_mesh.value_or(c.c_perp_emp), t.theta_emp, t.paper_theta, c.c_proof}});
  std::cout << "N=" << N << " omega_count=" << c.omega_count << " c_emp=" << c.c_emp << " C_emp=" << c.C_emp
            << " theta_emp=" << t.theta_emp << " paper_theta=" << t.paper_theta << " c_proof=" << c.c_proof << '\n';
  if (!c.meets_proof_floor()) {
    std::cerr << "FALSIFIED: orthogonal frame constant below the constructive floor\n";
    return kExitFalsified;
  }
  return kExitOk;
}

int verify_commutator(ExperimentConfig& cfg) {
  const double alpha = cfg.number("alpha", 1.0);
  const auto dim = static_cast<int>(cfg.integer("dim", 2));
  const auto points = static_cast<int>(cfg.integer("grid", 128));
  const long long samples = cfg.integer("samples", 100);
  const auto max_mode = static_cast<int>(cfg.integer("max_mode", 6));
  const double lambda = cfg.number("lambda", 8.0);
  const auto seed = cfg.seed();
  const auto out = cfg.out();
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  if (dim != 1 && dim != 2) throw InvalidArgument("dim must be 1 or 2");
  if (!(alpha > 0.0 && alpha < dim)) throw InvalidArgument("alpha must lie in (0, n)");
  if (!(lambda > 2.0)) throw InvalidArgument("lambda must be > 2");
  const Grid coarse(dim, points), fine(dim, 2 * points);
  if (max_mode < 1 || 2 * max_mode >= points) throw InvalidArgument("max_mode must lie in [1, grid/2)");
  std::optional<double> eps;
  if (alpha < 1.0) {
    eps = cfg.number("epsilon", default_epsilon(alpha, dim));
    if (!epsilon_window(alpha, dim).contains(*eps)) throw InvalidArgument("epsilon outside the admissible window");
  }

  const auto n = static_cast<std::size_t>(samples);
  const RatioReport r1 = commutator_ratio_suite(alpha, coarse, n, seed, {}, max_mode);
  const RatioReport r2 = commutator_ratio_suite(alpha, fine, n, seed, {}, max_mode);
  const double growth = r2.max_ratio / r1.max_ratio - 1.0;
  const bool finite = std::isfinite(r1.max_ratio) && std::isfinite(r2.max_ratio);
  const bool stable = finite && growth <= 0.10;

  double h2_error = 0.0, h2_scale = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(n, 50); ++i) {
    const Field u = random_band_limited(coarse, max_mode, SplitMix64::stream(seed, 2 * i)());
    const Field v = random_band_limited(coarse, max_mode, SplitMix64::stream(seed, 2 * i + 1)());
    Field grad(coarse, 1);
    for (int a = 0; a < dim; ++a) grad += hadamard(partial(a, u), partial(a, v));
    h2_error = std::max(h2_error, max_abs(h_alpha(2.0, u, v) - 2.0 * grad));
    h2_scale = std::max(h2_scale, 2.0 * max_abs(grad));
  }
  std::cout << "H2 identity max error: " << h2_error << " (relative " << h2_error / h2_scale << ")\n";

  Json results = {{"coarse", to_json(r1)},
                  {"fine", to_json(r2)},
                  {"refinement_growth", growth},
                  {"stable", stable},
                  {"h2_identity_max_error", h2_error},
                  {"h2_identity_relative_error", h2_error / h2_scale}};

  if (alpha >= 1.0 && alpha < 2.0) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 10); ++i) {
      const Field u = random_band_limited(coarse, max_mode, SplitMix64::stream(seed, 2 * i)());
      const Field v = random_band_limited(coarse, max_mode, SplitMix64::stream(seed, 2 * i + 1)());
      for (int a = 0; a < dim; ++a) {
        const Field lhs = riesz_of_commutator(alpha, a, u, v);
        worst = std::max(worst, max_abs(riesz_reduction_terms(alpha, a, u, v).sum() - lhs) / max_abs(lhs));
      }
    }
    results["riesz_reduction_relative_error"] = worst;
    std::cout << "Riesz reduction relative error: " << worst << '\n';
  }
  if (eps) {
    const RatioReport pc = pointwise_constant_suite(alpha, *eps, coarse, std::min<std::size_t>(n, 20), seed, max_mode);
    results["pointwise_constant"] = to_json(pc);
  }

  const double r = coarse.length() / (16.0 * lambda);
  const Point center{coarse.length() / 2.0, dim == 2 ? coarse.length() / 2.0 : 0.0};
  const Field u = random_band_limited(coarse, max_mode, SplitMix64::stream(seed, 0)());
  const Field v = random_band_limited(coarse, max_mode, SplitMix64::stream(seed, 1)());
  results["localized"] = to_json(localized_commutator_estimate(u, v, alpha, lambda, r, center));

  write_report(out, "verify-commutator", cfg, results);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({static_cast<double>(i), r1.ratios[i], r2.ratios[i]});
  write_csv(out / "tables" / "ratios.csv", {"sample", "ratio_coarse", "ratio_fine"}, rows);
  std::vector<double> idx(n), s1 = r1.ratios, s2 = r2.ratios;
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<double>(i);
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  write_line_plot(out / "plots" / "ratios.svg", {"Sorted commutator norm ratios", "sample rank", "ratio"},
                  {{"N=" + std::to_string(points), idx, s1}, {"N=" + std::to_string(2 * points), idx, s2}});

  std::cout << "max ratio " << r1.max_ratio << " (N=" << points << "), " << r2.max_ratio << " (N=" << 2 * points
            << "), growth " << growth << '\n';
  if (!stable) {
    std::cerr << "resolution-sensitive: ratio grows by " << growth << " under refinement\n";
    return kExitFalsified;
  }
  return kExitOk;
}

int flow(ExperimentConfig& cfg) {
  FlowConfig fc;
  fc.pbar = cfg.required_number("pbar");
  const auto points = static_cast<int>(cfg.integer("grid", 256));
  const std::string preset = cfg.text("preset", "perturbed");
  const double amplitude = cfg.number("amplitude", 0.1);
  const auto max_mode = static_cast<int>(cfg.integer("max_mode", 4));
  fc.tau = cfg.number("tau", 0.0);
  if (cfg.has("eps_reg")) fc.eps_reg = cfg.number("eps_reg", 0.0);
  fc.max_iters = static_cast<std::size_t>(std::max(0LL, cfg.integer("max_iters", 10000)));
  fc.tolerance = cfg.number("tolerance", 1e-6);
  fc.seed = cfg.seed();
  const auto out = cfg.out();
  fc.validate();
  if (preset != "identity" && preset != "perturbed") throw InvalidArgument("preset must be 'identity' or 'perturbed'");
  const Grid grid(1, points);
  if (max_mode < 1 || 2 * max_mode >= points) throw InvalidArgument("max_mode must lie in [1, grid/2)");

  const double pi = std::numbers::pi;
  const Field u0 = preset == "identity" ? identity_map(grid) : perturbed_identity(grid, amplitude, max_mode, fc.seed);
  const Frame frame = enumerate_frame(2);
  const auto tests = build_test_functions(grid, fc.pbar);
  write_field(out / "fields" / "u_initial", u0);

  CriticalPointReport rep;
  try {
    rep = constrained_descent(u0, fc, tests, frame);
  } catch (const SolverAbort& e) {
    std::cerr << "descent aborted: " << e.what() << '\n';
    write_report(out, "flow", cfg, {{"aborted", true}, {"message", e.what()}});
    return kExitFalsified;
  }
  write_field(out / "fields" / "u_final", rep.u);

  FlowConfig resolved = fc;
  resolved.eps_reg = rep.eps_reg;
  const double direct = el_residual(rep.u, tests, frame, resolved).max_abs;
  const auto radii = numbers_of(cfg.list("radii", Json::array({0.1, 0.2, 0.4, 0.8, 1.6})));
  const auto centers = net(grid, 8);
  const GrowthReport growth = growth_report(rep.u, resolved, radii, centers, frame);
  const HolderReport holder = holder_estimate(rep.u, radii, centers);
  const Field eta = bump(grid, {pi, 0.0}, 2.0);
  const LocalizationReport loc = localize(rep.u, eta, resolved);
  const SubcriticalSweep sweep = subcritical_sweep(rep.u, eta, {pi + 0.5, 0.0}, {0.05, 0.1, 0.2}, frame, resolved);
  const FrameConstants fcon = frame_bound_constants(2, 10000, fc.seed);
  const SplitReport split = pointwise_split(rep.u, laps(resolved.alpha_bar(1), rep.u), frame, fcon.lower(), fcon.upper());

  Json results = {{"preset", preset},
                  {"alpha_bar", fc.alpha_bar(1)},
                  {"descent", to_json(rep)},
                  {"energy", energy(rep.u, resolved)},
                  {"el_residual_direct", direct},
                  {"growth", to_json(growth)},
                  {"holder", to_json(holder)},
                  {"localization", to_json(loc)},
                  {"subcritical", to_json(sweep)},
                  {"pointwise_split", {{"worst_lower", split.worst_lower}, {"worst_upper", split.worst_upper}}}};
  write_report(out, "flow", cfg, results);

  std::vector<std::vector<double>> erows, rrows, grows, hrows, srows;
  std::vector<double> steps;
  for (std::size_t i = 0; i < rep.energy_trace.size(); ++i) {
    erows.push_back({static_cast<double>(i), rep.energy_trace[i]});
    steps.push_back(static_cast<double>(i));
  }
  for (std::size_t i = 0; i < rep.residual_trace.size(); ++i) rrows.push_back({static_cast<double>(i), rep.residual_trace[i]});
  std::vector<double> gr, gm, fit;
  for (const auto& row : growth.rows) {
    grows.push_back({row.radius, row.M, row.normal, row.tangential});
    gr.push_back(row.radius);
    gm.push_back(row.M);
  }
  if (growth.delta)
    for (double r : gr) fit.push_back(gm.front() * std::pow(r / gr.front(), *growth.delta));
  for (std::size_t i = 0; i < holder.radii.size(); ++i) hrows.push_back({holder.radii[i], holder.oscillation[i]});
  for (std::size_t i = 0; i < sweep.radii.size(); ++i) {
    const auto& t = sweep.terms[i];
    srows.push_back({sweep.radii[i], t.I, t.II, t.III, t.IV, t.sum()});
  }
  write_csv(out / "tables" / "energy_trace.csv", {"step", "energy"}, erows);
  write_csv(out / "tables" / "residual_trace.csv", {"check", "max_residual"}, rrows);
  write_csv(out / "tables" / "growth.csv", {"r", "M", "normal", "tangential"}, grows);
  write_csv(out / "tables" / "holder.csv", {"r", "oscillation"}, hrows);
  write_csv(out / "tables" / "subcritical.csv", {"r", "I", "II", "III", "IV", "sum"}, srows);
  write_line_plot(out / "plots" / "energy_trace.svg", {"Energy along the descent", "step", "energy"},
                  {{"energy", steps, rep.energy_trace}});
  std::vector<PlotSeries> growth_series{{"M(r)", gr, gm}};
  if (!fit.empty()) growth_series.push_back({"fit r^delta", gr, fit});
  write_line_plot(out / "plots" / "growth.svg", {"Local growth of the energy density", "r", "M(r)", true, true},
                  growth_series);

  std::cout << "iterations=" << rep.iterations << " energy=" << rep.energy_trace.back()
            << " residual=" << rep.residual_trace.back() << " delta=" << growth.delta.value_or(std::nan("")) << '\n';
  if (!rep.converged || !rep.energy_monotone() || rep.max_sphere_defect > 1e-14) {
    std::cerr << "descent did not reach a critical point (converged=" << rep.converged
              << ", monotone=" << rep.energy_monotone() << ")\n";
    return kExitFalsified;
  }
  return kExitOk;
}

int holder_report(ExperimentConfig& cfg) {
  const std::string path = cfg.text("field", "");
  const auto points = static_cast<int>(cfg.integer("grid", 256));
  const auto radii = numbers_of(cfg.list("radii", Json::array({0.1, 0.2, 0.4, 0.8, 1.6})));
  const auto centers = static_cast<int>(cfg.integer("centers", 8));
  const auto out = cfg.out();
  if (centers < 1) throw InvalidArgument("centers must be >= 1");
  const Field u = path.empty() ? identity_map(Grid(1, points)) : read_field(path);
  FlowConfig fc;
  fc.pbar = cfg.number("pbar", 2.0);
  fc.validate();

  const auto pts = net(u.grid(), centers);
  const HolderReport holder = holder_estimate(u, radii, pts);
  Json results = {{"holder", to_json(holder)}};
  if (u.components() >= 2 && u.components() <= 5) {
    const GrowthReport growth = growth_report(u, fc, radii, pts, enumerate_frame(u.components()));
    results["growth"] = to_json(growth);
    std::vector<std::vector<double>> rows;
    for (const auto& row : growth.rows) rows.push_back({row.radius, row.M, row.normal, row.tangential});
    write_csv(out / "tables" / "growth.csv", {"r", "M", "normal", "tangential"}, rows);
  }
  write_report(out, "holder-report", cfg, results);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < holder.radii.size(); ++i) rows.push_back({holder.radii[i], holder.oscillation[i]});
  write_csv(out / "tables" / "holder.csv", {"r", "oscillation"}, rows);
  write_line_plot(out / "plots" / "holder.svg", {"Oscillation on balls", "r", "osc(r)", true, true},
                  {{"osc", holder.radii, holder.oscillation}});
  if (holder.gamma) std::cout << "gamma_emp=" << *holder.gamma << " seminorm=" << *holder.seminorm << '\n';
  else std::cout << "gamma_emp undefined (locally constant field)\n";
  return kExitOk;
}

}  // namespace fracmap::cli
