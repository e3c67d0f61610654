#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "cavitytrap/params.hpp"

namespace cavitytrap {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// Atom position in metres; z is measured from the left cavity mirror.
template <typename Scalar = double>
struct Position {
  Scalar x = 0, y = 0, z = 0;

  Scalar rho() const { return std::hypot(x, y); }
  bool inside_cavity(const SystemParams& params) const {
    return z >= 0 && z <= static_cast<Scalar>(params.cavity_length());
  }
};

/// A scalar field and its Cartesian gradient at one point.
template <typename Scalar = double>
struct FieldValue {
  Scalar value = 0;
  Vector3<Scalar> gradient = Vector3<Scalar>::Zero();
};

/// FORT light shift S_F = S0 sin^2(kF z) exp(-2 rho^2 / w0^2).
template <typename Scalar = double>
FieldValue<Scalar> fort_shift(const Position<Scalar>& pos, const SystemParams& params) {
  const Scalar kF = static_cast<Scalar>(params.kF());
  const Scalar w0sq = static_cast<Scalar>(params.w0 * params.w0);
  const Scalar S0 = static_cast<Scalar>(params.S0);
  const Scalar s = std::sin(kF * pos.z);
  const Scalar envelope = std::exp(-2 * (pos.x * pos.x + pos.y * pos.y) / w0sq);
  FieldValue<Scalar> f;
  f.value = S0 * s * s * envelope;
  f.gradient << -4 * pos.x / w0sq * f.value, -4 * pos.y / w0sq * f.value,
      S0 * kF * std::sin(2 * kF * pos.z) * envelope;
  return f;
}

/// Cavity coupling g = g0 sin(k z) exp(-rho^2 / w0^2).
template <typename Scalar = double>
FieldValue<Scalar> coupling(const Position<Scalar>& pos, const SystemParams& params) {
  const Scalar k = static_cast<Scalar>(params.k());
  const Scalar w0sq = static_cast<Scalar>(params.w0 * params.w0);
  const Scalar g0 = static_cast<Scalar>(params.g0);
  const Scalar envelope = std::exp(-(pos.x * pos.x + pos.y * pos.y) / w0sq);
  FieldValue<Scalar> f;
  f.value = g0 * std::sin(k * pos.z) * envelope;
  f.gradient << -2 * pos.x / w0sq * f.value, -2 * pos.y / w0sq * f.value,
      g0 * k * std::cos(k * pos.z) * envelope;
  return f;
}

/// One FORT well: the anti-node z_n = (n/2 - 1/4) lambdaF and its axial
/// extent of lambdaF / 2.
struct WellDescriptor {
  int index = 0;  // 1-based
  double z_center = 0;
  double z_lo = 0;
  double z_hi = 0;
  double g_at_antinode = 0;  // rad/s, on axis
  double S_at_antinode = 0;  // rad/s, on axis
};

WellDescriptor well(const SystemParams& params, int index);

/// All nF wells of the commensurate cavity, ordered by index.
std::vector<WellDescriptor> well_atlas(const SystemParams& params);

}  // namespace cavitytrap
