#pragma once

// Quasiclassical 3-D Langevin dynamics of the atom in one FORT well:
//   dv_z = F0_z/m dt - beta_zz v_z dt + sqrt(2 (D_zz + D_se,z)) dW_z
//   dv_x = F0_rho/m (x/rho) dt + sqrt(2 D_se,x) dW_x   (same for y)
//   dr = v dt

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "cavitytrap/grid.hpp"

namespace cavitytrap {

using Rng = std::mt19937_64;

/// Engine plus a persistent standard-normal distribution, so that paired
/// draws are not discarded between steps.
struct NoiseSource {
  explicit NoiseSource(std::uint64_t seed) : engine(seed) {}
  double operator()() { return normal(engine); }
  Rng engine;
  std::normal_distribution<double> normal;
};

struct AtomState {
  Eigen::Vector3d r = Eigen::Vector3d::Zero();  // (x, y, z), m
  Eigen::Vector3d v = Eigen::Vector3d::Zero();  // m/s
  double t = 0;
};

/// Standard-normal increments for the integrator.
template <typename Noise>
concept NormalSource = requires(Noise& n) {
  { n() } -> std::convertible_to<double>;
};

/// Coefficient source for the integrator: anything with
/// `LocalCoefficients at(double z, double rho) const`.
template <typename Field>
concept CoefficientField = requires(const Field& f, double z, double rho) {
  { f.at(z, rho) } -> std::convertible_to<LocalCoefficients>;
};

/// One Euler-Maruyama step. The velocity is advanced first and the position
/// uses the updated velocity (symplectic ordering; stable for the trap
/// oscillation at the default time step). Normal draws are taken in the
/// order x, y, z. On the axis the radial unit vector is zero.
template <CoefficientField Field, NormalSource Noise>
AtomState step(const AtomState& s, const Field& field, double dt, double mass, Noise& rng,
               bool noise = true) {
  const double rho = std::sqrt(s.r.x() * s.r.x() + s.r.y() * s.r.y());
  const LocalCoefficients c = field.at(s.r.z(), rho);
  double xi_x = 0, xi_y = 0, xi_z = 0;
  if (noise) {
    xi_x = rng();
    xi_y = rng();
    xi_z = rng();
  }
  const double ux = rho > 0 ? s.r.x() / rho : 0.0;
  const double uy = rho > 0 ? s.r.y() / rho : 0.0;
  const double sqdt = std::sqrt(dt);
  const double radial_kick = std::sqrt(2.0 * std::max(c.D_se_x, 0.0)) * sqdt;
  const double axial_kick = std::sqrt(2.0 * std::max(c.D_zz + c.D_se_z, 0.0)) * sqdt;

  AtomState n = s;
  n.v.x() += c.F0_rho / mass * ux * dt + radial_kick * xi_x;
  n.v.y() += c.F0_rho / mass * uy * dt + radial_kick * xi_y;
  n.v.z() += (c.F0_z / mass - c.beta_zz * s.v.z()) * dt + axial_kick * xi_z;
  n.r += n.v * dt;
  n.t += dt;
  return n;
}

enum class ExitReason { AxialExit, RadialExit, TimeCap };

const char* to_string(ExitReason reason);

struct TrajectoryConfig {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  double dt = 20e-9;
  double t_max = 0.1;
  double z_lo = 0;
  double z_hi = 0;
  double rho_max = 0;
  int sample_stride = 0;  // steps between series samples; 0 disables the series
  std::uint64_t seed = 0;
  bool noise = true;
};

struct TrajectorySample {
  double t = 0, x = 0, y = 0, z = 0, rho = 0, v_z = 0, photons = 0;
};

struct TrajectoryResult {
  double trapping_time = 0;
  ExitReason exit_reason = ExitReason::TimeCap;
  double v_rms_z = 0;  // over the whole trapped interval
  std::optional<double> v_rms_z_after_1ms;  // over t > 1 ms, if trapped that long
  std::uint64_t seed = 0;
  std::vector<TrajectorySample> series;
};

/// Default configuration for a well: on axis, z0 = anti-node + lambdaF/8,
/// v = (-10 cm/s, 0, 0), rho_max = 3 w0.
TrajectoryConfig default_trajectory_config(const SystemParams& params, const WellDescriptor& well);

/// Integrates until the atom leaves the well, crosses rho_max or reaches
/// t_max, drawing increments from `rng` (config.seed is only recorded).
template <NormalSource Noise>
TrajectoryResult simulate_trajectory(const TrajectoryConfig& config, const CoefficientGrid& grid,
                                     Noise& rng) {
  const double mass = grid.params().mass;
  const double z_lo = std::max(config.z_lo, grid.z_lo());
  const double z_hi = std::min(config.z_hi, grid.z_hi());
  const double rho_max = std::min(config.rho_max, grid.rho_max());

  TrajectoryResult result;
  result.seed = config.seed;
  AtomState s;
  s.r = config.position;
  s.v = config.velocity;

  double sum_v2 = 0, sum_v2_late = 0;
  std::int64_t late_steps = 0;
  std::int64_t k = 0;
  for (;;) {
    const double rho = std::sqrt(s.r.x() * s.r.x() + s.r.y() * s.r.y());
    if (s.r.z() < z_lo || s.r.z() > z_hi) {
      result.exit_reason = ExitReason::AxialExit;
      break;
    }
    if (rho >= rho_max) {
      result.exit_reason = ExitReason::RadialExit;
      break;
    }
    if (config.sample_stride > 0 && k % config.sample_stride == 0) {
      const double r = std::hypot(s.r.x(), s.r.y());
      result.series.push_back(
          {s.t, s.r.x(), s.r.y(), s.r.z(), r, s.v.z(), grid.at(s.r.z(), r).photons});
    }
    if (s.t >= config.t_max) {
      result.exit_reason = ExitReason::TimeCap;
      break;
    }
    s = step(s, grid, config.dt, mass, rng, config.noise);
    ++k;
    s.t = static_cast<double>(k) * config.dt;
    const double v2 = s.v.z() * s.v.z();
    sum_v2 += v2;
    if (s.t > 1e-3) {
      sum_v2_late += v2;
      ++late_steps;
    }
  }
  result.trapping_time = s.t;
  result.v_rms_z = k > 0 ? std::sqrt(sum_v2 / k) : std::abs(s.v.z());
  if (late_steps > 0) result.v_rms_z_after_1ms = std::sqrt(sum_v2_late / late_steps);
  return result;
}

/// As above with NoiseSource(config.seed).
TrajectoryResult simulate_trajectory(const TrajectoryConfig& config, const CoefficientGrid& grid);

/// Per-trajectory seed derived from (seed_base, index).
std::uint64_t derive_seed(std::uint64_t seed_base, std::uint64_t index);

struct SurvivalPoint {
  double T = 0;
  double P = 0;
};

struct TailFit {
  double tau = 0;
  double stderr_tau = 0;
  double t_tail = 0;
  int n_tail = 0;
};

struct EnsembleStats {
  std::vector<TrajectoryResult> trajectories;  // in index order
  std::vector<SurvivalPoint> survival;          // P(T) at the sorted trapping times
  std::optional<TailFit> fit;
  double fraction_untrapped = 0;  // trapping time < 1 ms
};

struct EnsembleOptions {
  int workers = 0;                   // 0: default_worker_count()
  std::vector<int> keep_series;      // indices whose time series are retained
};

/// Runs n trajectories from identical initial conditions; trajectory k uses
/// derive_seed(seed_base, k). Results do not depend on the worker count.
EnsembleStats run_ensemble(int n, const TrajectoryConfig& config_template,
                           const CoefficientGrid& grid, std::uint64_t seed_base,
                           EnsembleOptions options = {});

}  // namespace cavitytrap
