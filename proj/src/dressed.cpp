#include "cavitytrap/dressed.hpp"

namespace cavitytrap {

DressedPoint dressed_point(const Position<double>& pos, const SystemParams& params) {
  const auto gf = coupling(pos, params);
  const auto Sf = fort_shift(pos, params);
  const double g = gf.value, dg = gf.gradient.z();
  const double S = Sf.value, dS = Sf.gradient.z();
  const bool equal = params.trap_variant == TrapVariant::EqualShift;

  DressedPoint p;
  p.position = pos;
  const auto freq = dressed_frequencies(g, S, params.trap_variant);
  p.Delta_plus = freq.plus;
  p.Delta_minus = freq.minus;
  const auto angle = mixing_angle(g, detail::splitting_shift(S, params.trap_variant));
  p.sin_theta = angle.sin_theta;
  p.cos_theta = angle.cos_theta;

  // sin^2(theta) = (1 + S/R) / 2 with R = sqrt(g^2 + S^2); constant 1/2 for
  // the equal-shift trap.
  double s2 = angle.sin_theta * angle.sin_theta;
  double ds2 = 0.0;
  if (equal) {
    p.dDelta_minus_dz = g > 0 ? -dg : (g < 0 ? dg : -std::abs(dg));
  } else {
    const double root = std::hypot(g, S);
    if (root > 0.0) {
      const double droot = (g * dg + S * dS) / root;
      p.dDelta_minus_dz = dS - droot;
      ds2 = 0.5 * (dS * root - S * droot) / (root * root);
    } else {
      p.dDelta_minus_dz = dS - std::abs(dg);
    }
  }

  const double kappa = params.kappa, half_gamma = 0.5 * params.gamma;
  p.gamma_minus = s2 * kappa + (1.0 - s2) * half_gamma;
  const double dgamma = (kappa - half_gamma) * ds2;
  const double E0 = drive_amplitude(params);
  p.Omega_minus = E0 * std::sqrt(s2);

  const double detuning = p.Delta_minus - params.probe_detuning();
  const double denom = detuning * detuning + p.gamma_minus * p.gamma_minus;
  const double ddenom = 2.0 * detuning * p.dDelta_minus_dz + 2.0 * p.gamma_minus * dgamma;
  p.n_minus = E0 * E0 * s2 / denom;
  p.dn_minus_dz = E0 * E0 * (ds2 * denom - s2 * ddenom) / (denom * denom);

  p.R = -kHbar / (params.mass * p.gamma_minus) * p.dn_minus_dz * p.dDelta_minus_dz;
  return p;
}

std::vector<double> sisyphus_rate(const std::vector<double>& z, const SystemParams& params) {
  std::vector<double> R;
  R.reserve(z.size());
  for (double zi : z) R.push_back(dressed_point({0.0, 0.0, zi}, params).R);
  return R;
}

}  // namespace cavitytrap
