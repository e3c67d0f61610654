#pragma once

// Dressed states of the single-excitation manifold in the weak-driving
// picture: transition frequencies, mixing angle, decay and excitation rates,
// lower-state population and the Sisyphus friction estimate R.

#include <cmath>
#include <numbers>
#include <vector>

#include "cavitytrap/geometry.hpp"
#include "cavitytrap/params.hpp"

namespace cavitytrap {

template <typename Scalar = double>
struct DressedFrequencies {
  Scalar plus = 0;   // Delta_+ relative to the bare atomic frequency
  Scalar minus = 0;  // Delta_-
};

template <typename Scalar = double>
struct MixingAngle {
  Scalar sin_theta = 1;
  Scalar cos_theta = 0;
};

template <typename Scalar = double>
DressedFrequencies<Scalar> dressed_frequencies(Scalar g, Scalar S,
                                               TrapVariant variant = TrapVariant::OppositeShift) {
  if (variant == TrapVariant::EqualShift) return {std::abs(g), -std::abs(g)};
  const Scalar root = std::hypot(g, S);
  return {S + root, S - root};
}

/// |psi_-> = sin(theta)|g,1> + cos(theta)|e,0>. At g = 0 with S > 0 the lower
/// state is the bare cavity photon, (1, 0); at g = S = 0 the limit along S = 0
/// is used, (1/sqrt2, -1/sqrt2).
template <typename Scalar = double>
MixingAngle<Scalar> mixing_angle(Scalar g, Scalar S) {
  const Scalar u = std::hypot(g, S) - S;
  const Scalar norm = std::hypot(g, u);
  if (norm == Scalar(0)) {
    if (S > Scalar(0)) return {Scalar(1), Scalar(0)};
    const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
    return {h, -h};
  }
  return {g / norm, -u / norm};
}

template <typename Scalar = double>
struct DressedRates {
  Scalar gamma_minus = 0;  // sin^2 kappa + cos^2 Gamma/2
  Scalar Omega_minus = 0;  // E0 |sin|
};

namespace detail {

/// Effective light shift entering the single-excitation splitting: the
/// equal-shift trap moves both levels together, so only g mixes them.
template <typename Scalar>
Scalar splitting_shift(Scalar S, TrapVariant variant) {
  return variant == TrapVariant::EqualShift ? Scalar(0) : S;
}

}  // namespace detail

template <typename Scalar = double>
DressedRates<Scalar> dressed_rates(Scalar g, Scalar S, const SystemParams& params) {
  const auto m = mixing_angle(g, detail::splitting_shift(S, params.trap_variant));
  const Scalar s2 = m.sin_theta * m.sin_theta;
  const Scalar c2 = m.cos_theta * m.cos_theta;
  return {s2 * static_cast<Scalar>(params.kappa) + c2 * static_cast<Scalar>(params.gamma) / 2,
          static_cast<Scalar>(drive_amplitude(params)) * std::abs(m.sin_theta)};
}

/// n_- = Omega_-^2 / ((Delta_- - Delta_p)^2 + gamma_-^2).
template <typename Scalar = double>
Scalar dressed_population(Scalar g, Scalar S, const SystemParams& params) {
  const auto rates = dressed_rates(g, S, params);
  const Scalar detuning =
      dressed_frequencies(g, S, params.trap_variant).minus - static_cast<Scalar>(params.probe_detuning());
  return rates.Omega_minus * rates.Omega_minus /
         (detuning * detuning + rates.gamma_minus * rates.gamma_minus);
}

struct DressedPoint {
  Position<double> position;
  double Delta_plus = 0;
  double Delta_minus = 0;
  double sin_theta = 1;
  double cos_theta = 0;
  double gamma_minus = 0;
  double Omega_minus = 0;
  double n_minus = 0;
  double R = 0;  // 1/s
  double dDelta_minus_dz = 0;
  double dn_minus_dz = 0;
};

/// Full dressed-state description at a position, with analytic z-derivatives.
DressedPoint dressed_point(const Position<double>& pos, const SystemParams& params);

/// R(z) = -(hbar / (m gamma_-)) dn_-/dz dDelta_-/dz on the cavity axis.
std::vector<double> sisyphus_rate(const std::vector<double>& z, const SystemParams& params);

}  // namespace cavitytrap
