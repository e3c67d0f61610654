#include "cavitytrap/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cavitytrap/error.hpp"

namespace cavitytrap {

namespace {

// Row replaced by the trace functional: the |g,0><g,0| population row, which
// is minus the sum of the other population rows of any Liouvillian.
constexpr Eigen::Index kConstraintRow = 0;

}  // namespace

LocalField local_field(const Position<double>& pos, const SystemParams& params) {
  const auto g = coupling(pos, params);
  const auto S = fort_shift(pos, params);
  return {g.value, S.value, g.gradient, S.gradient};
}

std::complex<double> expectation(const CMatrix& A, const CVector& rho_vec) {
  const Eigen::Index d = A.rows();
  return (A * Eigen::Map<const CMatrix>(rho_vec.data(), d, d)).trace();
}

TracelessSolver::TracelessSolver(const Superoperator<double>& L)
    : L_(L.matrix), dim_(static_cast<Eigen::Index>(std::lround(std::sqrt(L.matrix.rows())))) {
  scale_ = L_.cwiseAbs().maxCoeff();
  if (!(scale_ > 0)) scale_ = 1.0;
  CMatrix bordered = L_;
  bordered.row(kConstraintRow) = scale_ * trace_functional<double>(dim_);
  lu_.compute(bordered);
  rcond_ = lu_.rcond();
}

CVector TracelessSolver::null_vector() const {
  if (degenerate()) {
    std::ostringstream msg;
    msg << "kernel of the Liouvillian is not one-dimensional (rcond " << rcond_ << ")";
    throw Error(ErrorKind::DegenerateSteadyState, msg.str());
  }
  CVector rhs = CVector::Zero(L_.rows());
  rhs(kConstraintRow) = scale_;
  CVector x = lu_.solve(rhs);
  const double residual = (L_ * x).norm();
  if (!std::isfinite(residual) || residual > 1e-10 * L_.norm()) {
    std::ostringstream msg;
    msg << "steady-state residual " << residual << " exceeds 1e-10 |L|";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  return x;
}

CVector TracelessSolver::solve(const CVector& rhs) const {
  if (degenerate())
    throw Error(ErrorKind::SingularSolve, "traceless-subspace system is rank deficient");
  CVector b = rhs;
  b(kConstraintRow) = 0.0;
  CVector x = lu_.solve(b);
  if (!x.allFinite()) throw Error(ErrorKind::SingularSolve, "non-finite solution");
  return x;
}

SteadyState steady_state(const TracelessSolver& solver, const OperatorSet<double>& ops) {
  const Eigen::Index d = solver.dim();
  const CVector x = solver.null_vector();
  CMatrix rho = Eigen::Map<const CMatrix>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  SteadyState ss;
  ss.rho0 = std::move(rho);
  ss.mean_photons = (ops.number * ss.rho0).trace().real();
  ss.mean_excitation = (ops.excitation * ss.rho0).trace().real();
  return ss;
}

SteadyState steady_state(const Superoperator<double>& L, const OperatorSet<double>& ops) {
  return steady_state(TracelessSolver(L), ops);
}

std::array<CMatrix, 3> hamiltonian_gradient(const OperatorSet<double>& ops, TrapVariant variant,
                                            const LocalField& field) {
  const CMatrix fort = fort_operator(ops, variant);
  const CMatrix coup = coupling_operator(ops);
  std::array<CMatrix, 3> grad;
  for (int i = 0; i < 3; ++i)
    grad[i] = kHbar * (field.grad_S(i) * fort + field.grad_g(i) * coup);
  return grad;
}

Eigen::Vector3d mean_force(const CMatrix& rho0, const std::array<CMatrix, 3>& gradH) {
  Eigen::Vector3d F;
  for (int i = 0; i < 3; ++i) {
    const std::complex<double> t = (rho0 * gradH[i]).trace();
    // Natural force scale: |grad H| with O(1) expectation values.
    const double scale = std::max(std::abs(t.real()), gradH[i].cwiseAbs().maxCoeff());
    if (std::abs(t.imag()) > 1e-6 * scale) {
      std::ostringstream msg;
      msg << "component " << i << ": Im/Re = " << t.imag() << "/" << t.real();
      throw Error(ErrorKind::ImaginaryForce, msg.str());
    }
    F(i) = -t.real();
  }
  return F;
}

Eigen::Matrix3d friction_tensor(const TracelessSolver& solver,
                                const LiouvillianPartials<double>& partials,
                                const LocalField& field, const CVector& rho0_vec,
                                const std::array<CMatrix, 3>& gradH, double mass) {
  Eigen::Matrix3d beta = Eigen::Matrix3d::Zero();
  const CVector dLg_rho = partials.dL_dg.matrix * rho0_vec;
  const CVector dLS_rho = partials.dL_dS.matrix * rho0_vec;
  for (int j = 0; j < 3; ++j) {
    if (field.grad_g(j) == 0.0 && field.grad_S(j) == 0.0) continue;
    // L d_j rho0 = -(d_j L) rho0
    const CVector grad_rho = solver.solve(-(field.grad_g(j) * dLg_rho + field.grad_S(j) * dLS_rho));
    // L rho1 = (unit velocity along j) . grad rho0
    const CVector rho1 = solver.solve(grad_rho);
    for (int i = 0; i < 3; ++i) {
      const double F1 = -expectation(gradH[i], rho1).real();
      beta(i, j) = -F1 / mass;
    }
  }
  return beta;
}

DiffusionResult diffusion_tensor(const TracelessSolver& solver, const std::array<CMatrix, 3>& gradH,
                                 const CMatrix& rho0, double mass) {
  const Eigen::Index d = rho0.rows();
  // Work with grad H / hbar to keep magnitudes O(rates / length).
  std::array<CMatrix, 3> F;
  std::array<bool, 3> active{};
  for (int i = 0; i < 3; ++i) {
    F[i] = -gradH[i] / kHbar;
    active[i] = gradH[i].cwiseAbs().maxCoeff() > 0.0;
  }
  std::array<CVector, 3> X;
  for (int j = 0; j < 3; ++j) {
    if (!active[j]) continue;
    const std::complex<double> mean = (F[j] * rho0).trace();
    const CMatrix rhs = F[j] * rho0 - mean * rho0;
    X[j] = solver.solve(Eigen::Map<const CVector>(rhs.data(), d * d));
  }
  Eigen::Matrix3d Dp = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (active[i] && active[j]) Dp(i, j) = -expectation(F[i], X[j]).real() * kHbar * kHbar;

  DiffusionResult out;
  const double largest = Dp.cwiseAbs().maxCoeff();
  out.asymmetry = largest > 0 ? (Dp - Dp.transpose()).cwiseAbs().maxCoeff() / largest : 0.0;
  out.asymmetry_warning = out.asymmetry > 0.01;
  out.momentum = 0.5 * (Dp + Dp.transpose());
  out.velocity = out.momentum / (mass * mass);
  return out;
}

Eigen::Vector3d se_diffusion(const SteadyState& ss, const SystemParams& params) {
  const double hk = kHbar * params.k();
  const double Dp = hk * hk * 0.5 * params.gamma * ss.mean_excitation;
  return params.polarization_factors * Dp / (params.mass * params.mass);
}

DiffusionAxes diagonalize_diffusion(const Eigen::Matrix3d& D) {
  DiffusionAxes out;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(D);
  out.eigenvalues = eig.eigenvalues();
  out.axes = eig.eigenvectors();

  const double xx = D(0, 0), zz = D(2, 2), xz = D(0, 2), zx = D(2, 0);
  const double shift = zz != 0.0 ? xz * zx / zz : 0.0;
  out.xx_perturbative = xx - shift;
  out.zz_perturbative = zz + shift;
  out.tilt = zz != 0.0 ? xz / zz : 0.0;

  // Exact eigenvalues of the x-z block; z' is the branch connected to D_zz.
  const double mean = 0.5 * (xx + zz);
  const double half_gap = std::sqrt(0.25 * (zz - xx) * (zz - xx) + 0.25 * (xz + zx) * (xz + zx));
  const double upper = mean + half_gap, lower = mean - half_gap;
  out.zz_exact = zz >= xx ? upper : lower;
  out.xx_exact = zz >= xx ? lower : upper;
  auto rel = [](double exact, double approx) {
    return exact != 0.0 ? std::abs(exact - approx) / std::abs(exact) : std::abs(approx);
  };
  out.discrepancy =
      std::max(rel(out.xx_exact, out.xx_perturbative), rel(out.zz_exact, out.zz_perturbative));
  return out;
}

CoefficientModel::CoefficientModel(const SystemParams& params)
    : params_(params), ops_(build_operators<double>(params.photon_cutoff)) {
  params_.validate();
  L0_ = liouvillian(params_, ops_, 0.0, 0.0);
  partials_ = liouvillian_partials(params_, ops_);
}

Superoperator<double> CoefficientModel::liouvillian_at(double g, double S) const {
  Superoperator<double> L;
  L.matrix = L0_.matrix + g * partials_.dL_dg.matrix + S * partials_.dL_dS.matrix;
  L.trace_annihilating = true;
  return L;
}

CoefficientSample CoefficientModel::sample(const Position<double>& pos,
                                           SampleOptions options) const {
  CoefficientSample s;
  s.position = pos;
  s.photon_cutoff = params_.photon_cutoff;
  s.field = local_field(pos, params_);
  const TracelessSolver solver(liouvillian_at(s.field.g, s.field.S));
  s.steady = steady_state(solver, ops_);
  const auto gradH = hamiltonian_gradient(ops_, params_.trap_variant, s.field);
  s.steady.mean_force = mean_force(s.steady.rho0, gradH);
  s.D_se = se_diffusion(s.steady, params_);

  const Eigen::Index d = ops_.dim();
  const CVector rho0_vec = Eigen::Map<const CVector>(s.steady.rho0.data(), d * d);
  if (options.friction)
    s.beta = friction_tensor(solver, partials_, s.field, rho0_vec, gradH, params_.mass);
  if (options.diffusion) {
    const auto diff = diffusion_tensor(solver, gradH, s.steady.rho0, params_.mass);
    s.D = diff.velocity;
    s.diffusion_asymmetry = diff.asymmetry;
  }
  const double denom = s.D_total(2, 2) * s.D_total(0, 0);
  s.d_ratio = denom > 0 ? s.D(2, 0) * s.D(2, 0) / denom : 0.0;
  return s;
}

CoefficientSample compute_sample(const SystemParams& params, const Position<double>& pos) {
  return CoefficientModel(params).sample(pos);
}

TruncationEstimate truncation_estimate(const SystemParams& params, const Position<double>& pos) {
  SystemParams bigger = params;
  bigger.photon_cutoff += 1;
  const auto a = compute_sample(params, pos);
  const auto b = compute_sample(bigger, pos);
  auto rel = [](double x, double y) {
    const double s = std::max(std::abs(x), std::abs(y));
    return s > 0 ? std::abs(x - y) / s : 0.0;
  };
  TruncationEstimate t;
  t.photon_cutoff = params.photon_cutoff;
  t.photons_rel_change = rel(a.steady.mean_photons, b.steady.mean_photons);
  t.beta_zz_rel_change = rel(a.beta(2, 2), b.beta(2, 2));
  t.D_zz_rel_change = rel(a.D(2, 2), b.D(2, 2));
  return t;
}

}  // namespace cavitytrap
