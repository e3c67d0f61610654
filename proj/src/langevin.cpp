#include "cavitytrap/langevin.hpp"

#include <atomic>
#include <thread>

#include "cavitytrap/error.hpp"
#include "cavitytrap/statistics.hpp"

namespace cavitytrap {

const char* to_string(ExitReason reason) {
  switch (reason) {
    case ExitReason::AxialExit: return "axial";
    case ExitReason::RadialExit: return "radial";
    case ExitReason::TimeCap: return "timecap";
  }
  return "unknown";
}

TrajectoryConfig default_trajectory_config(const SystemParams& params, const WellDescriptor& well) {
  TrajectoryConfig c;
  c.position = {0.0, 0.0, well.z_center + params.lambdaF() / 8.0};
  c.velocity = {-0.10, 0.0, 0.0};
  c.z_lo = well.z_lo;
  c.z_hi = well.z_hi;
  c.rho_max = 3.0 * params.w0;
  return c;
}

std::uint64_t derive_seed(std::uint64_t seed_base, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl sequence
  std::uint64_t z = seed_base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

TrajectoryResult simulate_trajectory(const TrajectoryConfig& config, const CoefficientGrid& grid) {
  NoiseSource rng(config.seed);
  return simulate_trajectory(config, grid, rng);
}

EnsembleStats run_ensemble(int n, const TrajectoryConfig& config_template,
                           const CoefficientGrid& grid, std::uint64_t seed_base,
                           EnsembleOptions options) {
  EnsembleStats stats;
  stats.trajectories.resize(n);
  const int workers =
      std::max(1, std::min(options.workers > 0 ? options.workers : default_worker_count(), n));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int k = next++; k < n; k = next++) {
      TrajectoryConfig c = config_template;
      c.seed = derive_seed(seed_base, static_cast<std::uint64_t>(k));
      const bool keep = std::find(options.keep_series.begin(), options.keep_series.end(), k) !=
                        options.keep_series.end();
      if (!keep) c.sample_stride = 0;
      stats.trajectories[k] = simulate_trajectory(c, grid);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<double> times;
  times.reserve(n);
  int untrapped = 0;
  for (const auto& tr : stats.trajectories) {
    times.push_back(tr.trapping_time);
    if (tr.trapping_time < 1e-3) ++untrapped;
  }
  stats.survival = survival_function(times);
  stats.fraction_untrapped = n > 0 ? static_cast<double>(untrapped) / n : 0.0;
  try {
    stats.fit = fit_survival_tail(stats);
  } catch (const Error&) {
    stats.fit.reset();
  }
  return stats;
}

}  // namespace cavitytrap
