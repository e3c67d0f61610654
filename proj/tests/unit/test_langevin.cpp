#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "cavitytrap/langevin.hpp"
#include "cavitytrap/statistics.hpp"

using namespace cavitytrap;

namespace {

struct ConstantField {
  LocalCoefficients c;
  LocalCoefficients at(double, double) const { return c; }
};

/// Grid over one well holding only the conservative FORT force of the
/// ground state, U = -hbar S_F.
CoefficientGrid fort_only_grid(const SystemParams& p, int nz = 2001, int nrho = 201) {
  const auto w = well(p, 5);
  CoefficientGrid grid(p, 5, w.z_lo, w.z_hi, 3 * p.w0, nz, nrho);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nrho; ++j) {
      const auto S = fort_shift(Position<double>{grid.rho_node(j), 0, grid.z_node(i)}, p);
      auto& c = grid.node(i, j);
      c.F0_z = kHbar * S.gradient.z();
      c.F0_rho = kHbar * S.gradient.x();
    }
  return grid;
}

SystemParams paper50() {
  SystemParams p;
  p.S0 = mhz_to_angular(50);
  return p;
}

}  // namespace

TEST_SUITE("langevin") {
  TEST_CASE("free flight is exact") {
    const ConstantField f{};
    NoiseSource rng(1);
    AtomState s;
    s.v = {0.1, -0.2, 0.3};
    for (int k = 0; k < 1000; ++k) s = step(s, f, 1e-6, 1e-25, rng, false);
    CHECK(s.r.x() == doctest::Approx(1e-4));
    CHECK(s.r.z() == doctest::Approx(3e-4));
    CHECK(s.v.y() == -0.2);
  }

  TEST_CASE("Ornstein-Uhlenbeck velocity variance equals D / beta") {
    ConstantField f;
    f.c.beta_zz = 1e4;
    f.c.D_zz = 0.6;
    f.c.D_se_z = 0.4;
    NoiseSource rng(42);
    AtomState s;
    double sum_z = 0;
    const int burn = 20000, n = 2000000;
    for (int k = 0; k < burn + n; ++k) {
      s = step(s, f, 1e-6, 1e-25, rng);
      if (k >= burn) sum_z += s.v.z() * s.v.z();
    }
    CHECK(sum_z / n == doctest::Approx(1.0 / 1e4).epsilon(0.05));
  }

  TEST_CASE("axial oscillation in a bare FORT matches the pendulum frequency") {
    const SystemParams p = paper50();
    const auto grid = fort_only_grid(p);
    const auto w = well(p, 5);
    auto cfg = default_trajectory_config(p, w);
    cfg.velocity.setZero();
    cfg.noise = false;
    cfg.t_max = 2e-4;
    cfg.sample_stride = 5;
    const auto r = simulate_trajectory(cfg, grid);
    CHECK(r.exit_reason == ExitReason::TimeCap);
    std::vector<double> z;
    for (const auto& s : r.series) z.push_back(s.z);
    const double f = dominant_frequency(z, 5 * cfg.dt, 300e3, 800e3, 5001);
    const double expected = oracle::pendulum_frequency(kHbar * p.S0, p.kF(), p.mass, p.lambdaF() / 8);
    CHECK(f == doctest::Approx(expected).epsilon(0.01));
    const double harmonic = std::sqrt(2 * kHbar * p.S0 * p.kF() * p.kF() / p.mass) / (2 * kPi);
    CHECK(expected < harmonic);
  }

  TEST_CASE("radial oscillation in a bare FORT is harmonic for small amplitude") {
    const SystemParams p = paper50();
    const auto grid = fort_only_grid(p, 201, 601);
    const auto w = well(p, 5);
    auto cfg = default_trajectory_config(p, w);
    cfg.position = {0.05 * p.w0, 0, w.z_center};
    cfg.velocity.setZero();
    cfg.noise = false;
    cfg.t_max = 3e-3;
    cfg.sample_stride = 500;
    const auto r = simulate_trajectory(cfg, grid);
    std::vector<double> x;
    for (const auto& s : r.series) x.push_back(s.x);
    const double f = dominant_frequency(x, 500 * cfg.dt, 1e3, 20e3, 4001);
    const double expected = std::sqrt(4 * kHbar * p.S0 / (p.mass * p.w0 * p.w0)) / (2 * kPi);
    CHECK(f == doctest::Approx(expected).epsilon(0.01));
  }

  TEST_CASE("exit classification") {
    const SystemParams p = paper50();
    const auto grid = fort_only_grid(p, 201, 61);
    const auto w = well(p, 5);
    auto cfg = default_trajectory_config(p, w);
    cfg.noise = false;
    cfg.velocity = {0, 0, 5.0};
    CHECK(simulate_trajectory(cfg, grid).exit_reason == ExitReason::AxialExit);
    cfg.velocity = {5.0, 0, 0};
    cfg.position.z() = w.z_center;
    const auto r = simulate_trajectory(cfg, grid);
    CHECK(r.exit_reason == ExitReason::RadialExit);
    CHECK(r.trapping_time < 1e-4);
    cfg.velocity.setZero();
    cfg.t_max = 1e-4;
    const auto capped = simulate_trajectory(cfg, grid);
    CHECK(capped.exit_reason == ExitReason::TimeCap);
    CHECK(capped.trapping_time == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(std::string(to_string(ExitReason::RadialExit)) == "radial");
  }

  TEST_CASE("seeded trajectories are reproducible and independent of workers") {
    const SystemParams p = paper50();
    auto grid = fort_only_grid(p, 101, 31);
    for (int i = 0; i < grid.nz(); ++i)
      for (int j = 0; j < grid.nrho(); ++j) {
        grid.node(i, j).beta_zz = 500;
        grid.node(i, j).D_zz = 3.0;
        grid.node(i, j).D_se_x = 0.1;
      }
    const auto w = well(p, 5);
    auto cfg = default_trajectory_config(p, w);
    cfg.t_max = 2e-3;
    cfg.seed = derive_seed(99, 0);
    const auto a = simulate_trajectory(cfg, grid);
    const auto b = simulate_trajectory(cfg, grid);
    CHECK(a.trapping_time == b.trapping_time);
    CHECK(a.v_rms_z == b.v_rms_z);

    const auto one = run_ensemble(1, cfg, grid, 99, {.workers = 1});
    CHECK(one.trajectories[0].v_rms_z == a.v_rms_z);
    CHECK(one.trajectories[0].trapping_time == a.trapping_time);

    const auto serial = run_ensemble(6, cfg, grid, 7, {.workers = 1});
    const auto parallel = run_ensemble(6, cfg, grid, 7, {.workers = 3});
    for (int k = 0; k < 6; ++k) {
      CHECK(serial.trajectories[k].trapping_time == parallel.trajectories[k].trapping_time);
      CHECK(serial.trajectories[k].v_rms_z == parallel.trajectories[k].v_rms_z);
      CHECK(serial.trajectories[k].seed == derive_seed(7, k));
    }
  }

  TEST_CASE("derived seeds differ across indices and bases") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(5, 17) == derive_seed(5, 17));
  }
}
