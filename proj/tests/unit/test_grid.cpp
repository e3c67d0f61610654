#include <doctest.h>

#include <random>

#include "cavitytrap/grid.hpp"

using namespace cavitytrap;

namespace {

SystemParams paper10() {
  SystemParams p;
  p.S0 = mhz_to_angular(10);
  p.delta_a = p.delta_c = mhz_to_angular(28);
  p.drive_photons = 0.001;
  return p;
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("nodes hold the direct samples") {
    const SystemParams p = paper10();
    const auto w = well(p, 5);
    const auto g = build_grid(p, w, 9, 5);
    const CoefficientModel model(p);
    for (int i : {0, 3, 8}) {
      for (int j : {0, 2, 4}) {
        const auto direct = reduce_sample(model.sample({g.rho_node(j), 0, g.z_node(i)}));
        const auto& n = g.node(i, j);
        CHECK(n.F0_z == direct.F0_z);
        CHECK(n.F0_rho == direct.F0_rho);
        CHECK(n.beta_zz == direct.beta_zz);
        CHECK(n.D_zz == direct.D_zz);
        CHECK(n.D_se_x == direct.D_se_x);
        CHECK(n.photons == direct.photons);
        const auto interp = g.at(g.z_node(i), g.rho_node(j));
        CHECK(interp.beta_zz == doctest::Approx(direct.beta_zz).epsilon(1e-12));
      }
    }
    CHECK(g.z_lo() == w.z_lo);
    CHECK(g.z_hi() == w.z_hi);
    CHECK(g.rho_max() == doctest::Approx(3 * p.w0));
  }

  TEST_CASE("interpolation is bilinear between nodes") {
    CoefficientGrid g(paper10(), 5, 0.0, 1.0, 1.0, 3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g.node(i, j).beta_zz = 2.0 * g.z_node(i) - 3.0 * g.rho_node(j) + 1.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 20; ++k) {
      const double z = u(rng), rho = u(rng);
      CHECK(g.at(z, rho).beta_zz == doctest::Approx(2 * z - 3 * rho + 1).epsilon(1e-12));
    }
    CHECK(g.contains(1.0, 1.0));
    CHECK_FALSE(g.contains(1.0 + 1e-12, 0.5));
    CHECK_FALSE(g.contains(0.5, -1e-12));
  }

  TEST_CASE("axisymmetric coefficients are finite with nonnegative diffusion") {
    const SystemParams p = paper10();
    const auto g = build_grid(p, well(p, 5), 11, 7);
    for (int i = 0; i < g.nz(); ++i) {
      for (int j = 0; j < g.nrho(); ++j) {
        const auto& n = g.node(i, j);
        CHECK(std::isfinite(n.beta_zz));
        CHECK(std::isfinite(n.F0_z));
        CHECK(n.D_zz >= 0.0);
        CHECK(n.D_se_z >= 0.0);
      }
      CHECK(g.node(i, 0).F0_rho == doctest::Approx(0.0).scale(1e-30));
    }
  }
}
