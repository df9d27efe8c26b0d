#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fracmap/reports.hpp"

namespace fracmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitUsage = 2;

/// Command-line overrides; any set flag wins over the config file.
struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> grid;
  std::optional<double> pbar;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<double> lambda;
  std::optional<long long> samples;
};

/// Config file merged with the overrides. Keys not given anywhere take the
/// command's defaults, and every value actually used is recorded in `used`
/// so the report can embed the effective configuration.
class ExperimentConfig {
 public:
  explicit ExperimentConfig(const Overrides& o);

  bool has(const std::string& key) const { return values_.contains(key); }
  double number(const std::string& key, double fallback);
  long long integer(const std::string& key, long long fallback);
  std::string text(const std::string& key, const std::string& fallback);
  Json list(const std::string& key, const Json& fallback);
  /// Throws InvalidArgument if the key is absent.
  double required_number(const std::string& key);

  std::uint64_t seed() { return static_cast<std::uint64_t>(integer("seed", 1)); }
  std::filesystem::path out() { return text("out", "out"); }
  const Json& used() const { return used_; }

 private:
  Json values_;
  Json used_ = Json::object();
};

int verify_kernel(ExperimentConfig& cfg);
int verify_frame(ExperimentConfig& cfg);
int verify_commutator(ExperimentConfig& cfg);
int flow(ExperimentConfig& cfg);
int holder_report(ExperimentConfig& cfg);

}  // namespace fracmap::cli
