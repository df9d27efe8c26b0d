#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fracmap/error.hpp"

using namespace fracmap::cli;

namespace {

void add_common_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON experiment config");
  sub->add_option("--seed", o.seed, "RNG seed");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--grid", o.grid, "points per axis");
  sub->add_option("--pbar", o.pbar, "energy exponent p");
  sub->add_option("--alpha", o.alpha, "fractional order");
  sub->add_option("--epsilon", o.epsilon, "kernel or majorant exponent");
  sub->add_option("--lambda", o.lambda, "localization scale factor");
  sub->add_option("--samples", o.samples, "number of random samples");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for fractional harmonic maps into spheres"};
  app.require_subcommand(1);
  Overrides o;
  using Command = int (*)(ExperimentConfig&);
  const std::pair<const char*, Command> commands[] = {
      {"verify-kernel", verify_kernel},
      {"verify-frame", verify_frame},
      {"verify-commutator", verify_commutator},
      {"flow", flow},
      {"holder-report", holder_report},
  };
  const char* help[] = {
      "search the constant of the kernel difference estimate",
      "frame bound constants and the theta dichotomy",
      "commutator norm ratios under grid refinement",
      "projected descent to a sphere-valued critical point",
      "oscillation decay and Hoelder exponent of a field",
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    add_common_flags(sub, o);
    subs.emplace_back(sub, commands[i].second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ExperimentConfig cfg(o);
    for (const auto& [sub, run] : subs)
      if (sub->parsed()) return run(cfg);
  } catch (const fracmap::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fracmap::Falsification& e) {
    std::cerr << "FALSIFIED: " << e.what() << "\nwitness: " << e.witness() << '\n';
    return kExitFalsified;
  } catch (const fracmap::SolverAbort& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kExitFalsified;
  }
  return kExitUsage;
}
