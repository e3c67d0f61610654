#pragma once

// Operators, Hamiltonian and Liouvillian of the driven atom-cavity system on a
// truncated Hilbert space.
//
// Basis ordering is atom-major: index(atom, n) = atom * (n_max + 1) + n with
// atom 0 = |g>, atom 1 = |e>, n = 0..n_max photons. Density matrices are
// column-vectorized, so vec(A X B) = (B^T kron A) vec(X).

#include <complex>

#include <Eigen/Core>
#include <unsupported/Eigen/KroneckerProduct>

#include "cavitytrap/params.hpp"

namespace cavitytrap {

template <typename Scalar>
using OperatorMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using StateVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Linear map on column-vectorized density matrices.
template <typename Scalar>
struct Superoperator {
  OperatorMatrix<Scalar> matrix;
  /// True for a Liouvillian (trace functional is a left null vector), false
  /// for partial derivatives.
  bool trace_annihilating = false;

  StateVector<Scalar> operator()(const StateVector<Scalar>& rho) const { return matrix * rho; }
};

template <typename Scalar>
struct OperatorSet {
  int photon_cutoff = 0;
  OperatorMatrix<Scalar> a, a_dagger, sigma_minus, sigma_plus, number, excitation, identity;

  Eigen::Index dim() const { return a.rows(); }
};

inline Eigen::Index basis_index(int atom, int photons, int photon_cutoff) {
  return static_cast<Eigen::Index>(atom) * (photon_cutoff + 1) + photons;
}

template <typename Scalar = double>
OperatorSet<Scalar> build_operators(int photon_cutoff) {
  using Mat = OperatorMatrix<Scalar>;
  const int nph = photon_cutoff + 1;
  const Eigen::Index d = 2 * nph;

  OperatorSet<Scalar> ops;
  ops.photon_cutoff = photon_cutoff;
  ops.a = Mat::Zero(d, d);
  ops.sigma_minus = Mat::Zero(d, d);
  for (int atom = 0; atom < 2; ++atom)
    for (int n = 1; n < nph; ++n)
      ops.a(basis_index(atom, n - 1, photon_cutoff), basis_index(atom, n, photon_cutoff)) =
          std::sqrt(static_cast<Scalar>(n));
  for (int n = 0; n < nph; ++n)
    ops.sigma_minus(basis_index(0, n, photon_cutoff), basis_index(1, n, photon_cutoff)) = Scalar(1);
  ops.a_dagger = ops.a.adjoint();
  ops.sigma_plus = ops.sigma_minus.adjoint();
  ops.number = ops.a_dagger * ops.a;
  ops.excitation = ops.sigma_plus * ops.sigma_minus;
  ops.identity = Mat::Identity(d, d);
  return ops;
}

/// a^dagger sigma^- + sigma^+ a; multiplies g in H / hbar.
template <typename Scalar>
OperatorMatrix<Scalar> coupling_operator(const OperatorSet<Scalar>& ops) {
  return ops.a_dagger * ops.sigma_minus + ops.sigma_plus * ops.a;
}

/// Operator multiplying S_F in H / hbar: 2(sigma^+ sigma^- - 1/2) for the
/// opposite-shift trap, -1 for the equal-shift trap.
template <typename Scalar>
OperatorMatrix<Scalar> fort_operator(const OperatorSet<Scalar>& ops, TrapVariant variant) {
  if (variant == TrapVariant::EqualShift) return -ops.identity;
  return Scalar(2) * ops.excitation - ops.identity;
}

/// H / hbar in the frame rotating at the probe frequency (rad/s).
template <typename Scalar = double>
OperatorMatrix<Scalar> hamiltonian(const SystemParams& params, const OperatorSet<Scalar>& ops,
                                   double g_local, double S_local) {
  const auto E0 = static_cast<Scalar>(drive_amplitude(params));
  return static_cast<Scalar>(params.delta_c) * ops.number +
         static_cast<Scalar>(params.delta_a) * ops.excitation +
         static_cast<Scalar>(S_local) * fort_operator(ops, params.trap_variant) +
         E0 * (ops.a_dagger + ops.a) + static_cast<Scalar>(g_local) * coupling_operator(ops);
}

template <typename Scalar = double>
OperatorMatrix<Scalar> hamiltonian(const SystemParams& params, double g_local, double S_local) {
  return hamiltonian(params, build_operators<Scalar>(params.photon_cutoff), g_local, S_local);
}

/// Superoperator of rho -> -i [A, rho].
template <typename Scalar>
OperatorMatrix<Scalar> commutator_superop(const OperatorMatrix<Scalar>& A) {
  const auto I = OperatorMatrix<Scalar>::Identity(A.rows(), A.cols());
  const std::complex<Scalar> minus_i(0, -1);
  OperatorMatrix<Scalar> left = Eigen::kroneckerProduct(I, A);
  OperatorMatrix<Scalar> right = Eigen::kroneckerProduct(A.transpose(), I);
  return minus_i * (left - right);
}

/// Superoperator of rho -> C rho C^dagger - 1/2 {C^dagger C, rho}.
template <typename Scalar>
OperatorMatrix<Scalar> dissipator_superop(const OperatorMatrix<Scalar>& C) {
  const auto I = OperatorMatrix<Scalar>::Identity(C.rows(), C.cols());
  const OperatorMatrix<Scalar> CdC = C.adjoint() * C;
  OperatorMatrix<Scalar> jump = Eigen::kroneckerProduct(C.conjugate(), C);
  OperatorMatrix<Scalar> left = Eigen::kroneckerProduct(I, CdC);
  OperatorMatrix<Scalar> right = Eigen::kroneckerProduct(CdC.transpose(), I);
  return jump - Scalar(0.5) * (left + right);
}

/// Liouvillian of
///   d rho/dt = -i[H, rho] - kappa {a^+ a, rho} + 2 kappa a rho a^+
///              - Gamma/2 {sigma^+ sigma^-, rho} + Gamma sigma^- rho sigma^+.
template <typename Scalar = double>
Superoperator<Scalar> liouvillian(const SystemParams& params, const OperatorSet<Scalar>& ops,
                                  double g_local, double S_local) {
  Superoperator<Scalar> L;
  L.matrix = commutator_superop<Scalar>(hamiltonian(params, ops, g_local, S_local)) +
             static_cast<Scalar>(2.0 * params.kappa) * dissipator_superop<Scalar>(ops.a) +
             static_cast<Scalar>(params.gamma) * dissipator_superop<Scalar>(ops.sigma_minus);
  L.trace_annihilating = true;
  return L;
}

template <typename Scalar = double>
Superoperator<Scalar> liouvillian(const SystemParams& params, double g_local, double S_local) {
  return liouvillian(params, build_operators<Scalar>(params.photon_cutoff), g_local, S_local);
}

template <typename Scalar>
struct LiouvillianPartials {
  Superoperator<Scalar> dL_dg;
  Superoperator<Scalar> dL_dS;
};

/// dL/dg and dL/dS_F. L is affine in both, so these do not depend on the
/// local field values.
template <typename Scalar = double>
LiouvillianPartials<Scalar> liouvillian_partials(const SystemParams& params,
                                                 const OperatorSet<Scalar>& ops) {
  LiouvillianPartials<Scalar> p;
  p.dL_dg.matrix = commutator_superop<Scalar>(coupling_operator(ops));
  const Eigen::Index d2 = ops.dim() * ops.dim();
  if (params.trap_variant == TrapVariant::EqualShift)
    p.dL_dS.matrix = OperatorMatrix<Scalar>::Zero(d2, d2);
  else
    p.dL_dS.matrix = commutator_superop<Scalar>(fort_operator(ops, params.trap_variant));
  return p;
}

template <typename Scalar = double>
LiouvillianPartials<Scalar> liouvillian_partials(const SystemParams& params, double /*g_local*/,
                                                 double /*S_local*/) {
  return liouvillian_partials(params, build_operators<Scalar>(params.photon_cutoff));
}

template <typename Scalar>
StateVector<Scalar> vec(const OperatorMatrix<Scalar>& rho) {
  return Eigen::Map<const StateVector<Scalar>>(rho.data(), rho.size());
}

template <typename Scalar>
OperatorMatrix<Scalar> unvec(const StateVector<Scalar>& v, Eigen::Index dim) {
  return Eigen::Map<const OperatorMatrix<Scalar>>(v.data(), dim, dim);
}

/// Row vector t with t . vec(rho) = Tr rho.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> trace_functional(Eigen::Index dim) {
  Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> t =
      Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic>::Zero(dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) t(i * dim + i) = Scalar(1);
  return t;
}

}  // namespace cavitytrap
