#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace fracmap::detail {
namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex plan_mutex;

struct PlanCache {
  std::map<std::tuple<int, int, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

fftw_plan plan_for(const Grid& grid, FftDirection direction) {
  static PlanCache cache;
  const int sign = direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  const auto key = std::make_tuple(grid.dim(), grid.points(), sign);
  std::lock_guard lock(plan_mutex);
  if (auto it = cache.plans.find(key); it != cache.plans.end()) return it->second;

  std::vector<std::complex<double>> scratch(grid.sites());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int n[2] = {grid.points(), grid.points()};
  fftw_plan plan = fftw_plan_dft(grid.dim(), n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft(const Grid& grid, std::span<std::complex<double>> data, FftDirection direction) {
  fftw_plan plan = plan_for(grid, direction);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace fracmap::detail
