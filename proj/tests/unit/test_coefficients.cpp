#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "../oracles.hpp"
#include "cavitytrap/coefficients.hpp"
#include "cavitytrap/error.hpp"

using namespace cavitytrap;

namespace {

SystemParams paper50() {
  SystemParams p;
  p.S0 = mhz_to_angular(50);
  p.delta_a = p.delta_c = mhz_to_angular(10);
  p.drive_photons = 0.01;
  return p;
}

double well5(const SystemParams& p, double frac) { return (2.0 + 0.5 * frac) * p.lambdaF(); }

}  // namespace

TEST_SUITE("coefficients") {
  TEST_CASE("steady state is a unit-trace positive density matrix") {
    const SystemParams p = paper50();
    const CoefficientModel model(p);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 8; ++k) {
      const auto s = model.sample({u(rng) * p.w0, 0, well5(p, u(rng))}, {false, false});
      const CMatrix& rho = s.steady.rho0;
      CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
      CHECK((rho - rho.adjoint()).norm() < 1e-10);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
      CHECK(es.eigenvalues().minCoeff() > -1e-10);
      CHECK(s.steady.mean_excitation >= 0.0);
      CHECK(s.steady.mean_excitation <= 1.0);
    }
  }

  TEST_CASE("steady state agrees with long-time evolution from vacuum") {
    const SystemParams p = paper50();
    const CoefficientModel model(p);
    const LocalField f = local_field({0, 0, well5(p, 0.5)}, p);
    const auto ss = steady_state(model.liouvillian_at(f.g, f.S), model.ops());
    const CMatrix ref = oracle::relax_from_vacuum(model, f.g, f.S);
    CHECK((ss.rho0 - ref).norm() < 1e-8);
    CHECK(ss.mean_photons == doctest::Approx(0.01).epsilon(1.0));
  }

  TEST_CASE("decoupled atom holds the empty-cavity photon number") {
    SystemParams p = paper50();
    for (double ne : {1e-4, 1e-3, 0.01}) {
      p.drive_photons = ne;
      const CoefficientModel model(p);
      const auto ss = steady_state(model.liouvillian_at(0.0, p.S0), model.ops());
      CHECK(ss.mean_photons == doctest::Approx(ne).epsilon(1e-6));
    }
  }

  TEST_CASE("undriven system: ground state, FORT force only, no friction or diffusion") {
    for (auto variant : {TrapVariant::OppositeShift, TrapVariant::EqualShift}) {
      SystemParams p = paper50();
      p.drive_photons = 0;
      p.trap_variant = variant;
      const CoefficientModel model(p);
      const Position<double> r{0.3 * p.w0, 0.1 * p.w0, well5(p, 0.3)};
      const auto s = model.sample(r);
      CHECK(std::abs(s.steady.rho0(0, 0) - 1.0) < 1e-12);
      CHECK(s.steady.rho0.norm() == doctest::Approx(1.0).epsilon(1e-12));
      const Eigen::Vector3d expected = kHbar * fort_shift(r, p).gradient;
      CHECK((s.steady.mean_force - expected).norm() < 1e-9 * expected.norm());
      CHECK(s.beta.norm() < 1e-9);
      CHECK(s.D.norm() < 1e-12);
      CHECK(s.D_se.norm() == 0.0);
    }
  }

  TEST_CASE("no axial FORT force at an anti-node") {
    SystemParams p = paper50();
    p.g0 = 0;  // remove the cavity force, leave the driven atom
    const CoefficientModel model(p);
    const auto s = model.sample({0, 0, 0.25 * p.lambdaF()}, {false, false});
    CHECK(std::abs(s.steady.mean_force.z()) < 1e-30);
  }

  TEST_CASE("imaginary force is rejected") {
    const auto ops = build_operators<double>(1);
    CMatrix rho = CMatrix::Zero(4, 4);
    rho(0, 0) = 1.0;
    rho(0, 1) = std::complex<double>(0, 0.5);
    std::array<CMatrix, 3> grad{CMatrix::Zero(4, 4), CMatrix::Zero(4, 4), ops.a + ops.a_dagger};
    try {
      mean_force(rho, grad);
      FAIL("expected ImaginaryForce");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ImaginaryForce);
    }
  }

  TEST_CASE("closed system has a degenerate steady state") {
    SystemParams p = paper50();
    p.kappa = 0;
    p.gamma = 0;
    const CoefficientModel model(p);
    try {
      steady_state(model.liouvillian_at(p.g0, p.S0), model.ops());
      FAIL("expected DegenerateSteadyState");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateSteadyState);
    }
  }

  TEST_CASE("regression diffusion equals the time-domain correlation integral") {
    const SystemParams p = paper50();
    const CoefficientModel model(p);
    for (double frac : {0.3, 0.55}) {
      const Position<double> r{0, 0, well5(p, frac)};
      const double solver = model.sample(r).D(2, 2);
      const double direct = oracle::diffusion_zz_time_domain(model, r);
      CHECK(solver == doctest::Approx(direct).epsilon(1e-2));
    }
  }

  TEST_CASE("friction equals the dragged-atom lag force") {
    const SystemParams p = paper50();
    const CoefficientModel model(p);
    const Position<double> r{0, 0, well5(p, 0.5)};
    const double solver = model.sample(r).beta(2, 2);
    const double dragged = oracle::friction_zz_dragged(model, r);
    CHECK(solver == doctest::Approx(dragged).epsilon(0.05));
  }

  TEST_CASE("diffusion tensor is symmetric positive semidefinite") {
    const SystemParams p = paper50();
    const CoefficientModel model(p);
    for (double frac : {0.1, 0.4, 0.8}) {
      const auto s = model.sample({0.4 * p.w0, 0.2 * p.w0, well5(p, frac)});
      CHECK((s.D - s.D.transpose()).norm() <= 1e-12 * s.D.norm());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s.D);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().cwiseAbs().maxCoeff());
      CHECK(s.d_ratio >= 0.0);
      CHECK(s.diffusion_asymmetry < 0.01);
    }
  }

  TEST_CASE("spontaneous-emission diffusion") {
    const SystemParams p = paper50();
    SteadyState ss;
    ss.mean_excitation = 0;
    CHECK(se_diffusion(ss, p).norm() == 0.0);
    ss.mean_excitation = 0.5;
    const auto D = se_diffusion(ss, p);
    CHECK(D.z() / D.x() == doctest::Approx(4.0 / 3.0));
    CHECK(D.x() == D.y());
    const double bound = 0.4 * kHbar * kHbar * p.k() * p.k() * p.gamma / 4 / (p.mass * p.mass);
    CHECK(D.z() <= bound * (1 + 1e-12));
  }

  TEST_CASE("linear response in the drive strength") {
    SystemParams p = paper50();
    const Position<double> r{0, 0, well5(p, 0.45)};
    p.drive_photons = 1e-4;
    const auto a = compute_sample(p, r);
    p.drive_photons = 1e-3;
    const auto b = compute_sample(p, r);
    CHECK(b.beta(2, 2) / a.beta(2, 2) == doctest::Approx(10.0).epsilon(0.02));
    CHECK(b.D(2, 2) / a.D(2, 2) == doctest::Approx(10.0).epsilon(0.02));
  }

  TEST_CASE("photon cutoff is adequate at the paper drive") {
    const SystemParams p = paper50();
    const auto t = truncation_estimate(p, {0, 0, well5(p, 0.5)});
    CHECK(t.photons_rel_change < 1e-3);
    CHECK(t.beta_zz_rel_change < 1e-2);
    CHECK(t.D_zz_rel_change < 1e-2);
  }

  TEST_CASE("diffusion axes") {
    Eigen::Matrix3d D = Eigen::Vector3d(2.0, 3.0, 5.0).asDiagonal();
    auto ax = diagonalize_diffusion(D);
    CHECK(ax.tilt == 0.0);
    CHECK(ax.xx_exact == doctest::Approx(2.0));
    CHECK(ax.zz_exact == doctest::Approx(5.0));

    D.setZero();
    D(0, 0) = 1;
    D(2, 2) = 100;
    D(0, 2) = D(2, 0) = 0.01;
    D(1, 1) = 1;
    ax = diagonalize_diffusion(D);
    const auto [lo, hi] = oracle::symmetric_2x2_eigenvalues(1, 0.01, 100);
    CHECK(ax.xx_exact == doctest::Approx(lo).epsilon(1e-12));
    CHECK(ax.zz_exact == doctest::Approx(hi).epsilon(1e-12));
    CHECK(ax.xx_perturbative == doctest::Approx(lo).epsilon(1e-6));
    CHECK(ax.zz_perturbative == doctest::Approx(hi).epsilon(1e-6));
    CHECK(ax.tilt == doctest::Approx(1e-4));
  }

  TEST_CASE("perturbative axes hold where the cross term is small") {
    const SystemParams p = paper50();
    const CoefficientModel model(p);
    int checked = 0;
    for (int k = 0; k <= 10; ++k) {
      const auto s = model.sample({0.5 * p.w0, 0, well5(p, 0.1 * k)});
      Eigen::Matrix3d D = s.D;
      D.diagonal() += s.D_se;
      const auto ax = diagonalize_diffusion(D);
      CHECK(s.d_ratio < 0.01);
      if (s.d_ratio < 1e-3) {
        CHECK(ax.discrepancy < 1e-3);
        ++checked;
      }
    }
    CHECK(checked > 0);
  }
}
