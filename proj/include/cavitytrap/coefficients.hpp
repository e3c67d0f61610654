#pragma once

// Zero-velocity steady state, mean force, friction tensor and velocity
// diffusion tensor of the atom at a fixed position.

#include <array>
#include <optional>

#include <Eigen/Core>
#include <Eigen/LU>

#include "cavitytrap/geometry.hpp"
#include "cavitytrap/operators.hpp"

namespace cavitytrap {

using CMatrix = OperatorMatrix<double>;
using CVector = StateVector<double>;

/// g(r), S_F(r) and their gradients; the Liouvillian depends on position
/// only through these.
struct LocalField {
  double g = 0;
  double S = 0;
  Eigen::Vector3d grad_g = Eigen::Vector3d::Zero();
  Eigen::Vector3d grad_S = Eigen::Vector3d::Zero();
};

LocalField local_field(const Position<double>& pos, const SystemParams& params);

/// Tr(A rho) for a column-vectorized rho.
std::complex<double> expectation(const CMatrix& A, const CVector& rho_vec);

/// Factorization of a Liouvillian with the trace constraint imposed in place
/// of one (redundant) population row. Solves L x = b for traceless b on the
/// traceless subspace, and L x = 0 with Tr x = 1.
class TracelessSolver {
 public:
  explicit TracelessSolver(const Superoperator<double>& L);

  Eigen::Index dim() const { return dim_; }
  /// Bordered system numerically singular: the kernel of L is more than
  /// one-dimensional.
  bool degenerate() const { return rcond_ < kDegenerateRcond; }
  double rcond() const { return rcond_; }

  static constexpr double kDegenerateRcond = 1e-13;

  /// Unit-trace null vector of L. Throws DegenerateSteadyState or NoConvergence.
  CVector null_vector() const;

  /// Traceless x with L x = rhs; rhs must be traceless. Throws SingularSolve.
  CVector solve(const CVector& rhs) const;

 private:
  CMatrix L_;
  Eigen::Index dim_;
  double scale_;
  Eigen::PartialPivLU<CMatrix> lu_;
  double rcond_ = 0;
};

struct SteadyState {
  CMatrix rho0;
  double mean_photons = 0;     // <a^+ a>
  double mean_excitation = 0;  // <sigma^+ sigma^->
  Eigen::Vector3d mean_force = Eigen::Vector3d::Zero();  // N
};

/// Steady state of L; mean_force is left zero (see mean_force()).
SteadyState steady_state(const Superoperator<double>& L, const OperatorSet<double>& ops);
SteadyState steady_state(const TracelessSolver& solver, const OperatorSet<double>& ops);

/// grad H as three operators in J/m.
std::array<CMatrix, 3> hamiltonian_gradient(const OperatorSet<double>& ops, TrapVariant variant,
                                            const LocalField& field);

/// F0 = -Tr(rho0 grad H). Throws ImaginaryForce if the trace is not real.
Eigen::Vector3d mean_force(const CMatrix& rho0, const std::array<CMatrix, 3>& gradH);

/// beta_ij = -F1_i / (m v_j) from the first-order velocity correction of the
/// steady state. Directions with vanishing field gradients give a zero column.
Eigen::Matrix3d friction_tensor(const TracelessSolver& solver,
                                const LiouvillianPartials<double>& partials,
                                const LocalField& field, const CVector& rho0_vec,
                                const std::array<CMatrix, 3>& gradH, double mass);

struct DiffusionResult {
  Eigen::Matrix3d momentum = Eigen::Matrix3d::Zero();  // D_p, symmetrized, kg^2 m^2 / s^3
  Eigen::Matrix3d velocity = Eigen::Matrix3d::Zero();  // D = D_p / m^2, m^2/s^3
  double asymmetry = 0;  // max |D_p - D_p^T| / max |D_p| before symmetrization
  bool asymmetry_warning = false;  // asymmetry > 1%
};

/// Regression-theorem diffusion: D_p,ij = -Re Tr(F_i X_j), L X_j = dF_j rho0.
DiffusionResult diffusion_tensor(const TracelessSolver& solver, const std::array<CMatrix, 3>& gradH,
                                 const CMatrix& rho0, double mass);

/// Spontaneous-emission velocity diffusion N_i hbar^2 k^2 (Gamma/2) <sigma^+ sigma^-> / m^2.
Eigen::Vector3d se_diffusion(const SteadyState& ss, const SystemParams& params);

struct DiffusionAxes {
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();  // ascending
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();     // columns
  double xx_perturbative = 0;  // D_xx - D_xz D_zx / D_zz
  double zz_perturbative = 0;  // D_zz + D_xz D_zx / D_zz
  double xx_exact = 0;
  double zz_exact = 0;
  double tilt = 0;             // D_xz / D_zz
  double discrepancy = 0;      // max relative |exact - perturbative| over x', z'
};

DiffusionAxes diagonalize_diffusion(const Eigen::Matrix3d& D);

struct CoefficientSample {
  Position<double> position;
  LocalField field;
  SteadyState steady;
  Eigen::Matrix3d beta = Eigen::Matrix3d::Zero();  // 1/s
  Eigen::Matrix3d D = Eigen::Matrix3d::Zero();     // cavity/FORT part, m^2/s^3
  Eigen::Vector3d D_se = Eigen::Vector3d::Zero();  // m^2/s^3
  double d_ratio = 0;  // D_zx^2 / (D_zz D_xx), totals including D_se
  double diffusion_asymmetry = 0;
  int photon_cutoff = 0;

  double D_total(int i, int j) const { return D(i, j) + (i == j ? D_se(i) : 0.0); }
};

struct SampleOptions {
  bool friction = true;
  bool diffusion = true;
};

/// Precomputed operators and Liouvillian parts for one parameter set; cheap
/// to evaluate at many positions. Immutable after construction.
class CoefficientModel {
 public:
  explicit CoefficientModel(const SystemParams& params);

  const SystemParams& params() const { return params_; }
  const OperatorSet<double>& ops() const { return ops_; }
  const LiouvillianPartials<double>& partials() const { return partials_; }

  /// L(g, S) = L(0, 0) + g dL/dg + S dL/dS.
  Superoperator<double> liouvillian_at(double g, double S) const;

  CoefficientSample sample(const Position<double>& pos, SampleOptions options = {}) const;

 private:
  SystemParams params_;
  OperatorSet<double> ops_;
  Superoperator<double> L0_;
  LiouvillianPartials<double> partials_;
};

CoefficientSample compute_sample(const SystemParams& params, const Position<double>& pos);

struct TruncationEstimate {
  int photon_cutoff = 0;
  double photons_rel_change = 0;
  double beta_zz_rel_change = 0;
  double D_zz_rel_change = 0;
};

/// Re-runs a sample with photon_cutoff + 1 and reports relative changes.
TruncationEstimate truncation_estimate(const SystemParams& params, const Position<double>& pos);

}  // namespace cavitytrap
