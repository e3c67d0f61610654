#pragma once

#include <Eigen/Core>

#include "cavitytrap/units.hpp"

namespace cavitytrap {

/// Sign of the FORT light shift on the excited state. The ground state is
/// always shifted down by S_F.
enum class TrapVariant { OppositeShift, EqualShift };

const char* to_string(TrapVariant variant);

/// Physical constants and knobs of the driven atom-cavity system.
///
/// Frequencies are angular (rad/s), lengths in metres. The FORT wavelength is
/// not stored; it follows from the commensurate cavity length
/// L = n0 lambda0 / 2 = nF lambdaF / 2.
struct SystemParams {
  double g0 = mhz_to_angular(30.0);
  double S0 = mhz_to_angular(50.0);
  double kappa = mhz_to_angular(4.0);
  double gamma = mhz_to_angular(5.2);
  double delta_c = mhz_to_angular(10.0);  // omega_c - omega_p
  double delta_a = mhz_to_angular(10.0);  // omega_a - omega_p
  double drive_photons = 0.01;            // N_e
  double lambda0 = 852.4e-9;
  int n0 = 32;
  int nF = 30;
  double w0 = 20e-6;
  double mass = kCs133Mass;
  int photon_cutoff = 4;
  TrapVariant trap_variant = TrapVariant::OppositeShift;
  Eigen::Vector3d polarization_factors{0.3, 0.3, 0.4};

  double lambdaF() const { return n0 * lambda0 / nF; }
  double k() const { return 2.0 * kPi / lambda0; }
  double kF() const { return 2.0 * kPi / lambdaF(); }
  double cavity_length() const { return 0.5 * n0 * lambda0; }
  /// Delta_p = omega_p - omega_a.
  double probe_detuning() const { return -delta_a; }
  int hilbert_dim() const { return 2 * (photon_cutoff + 1); }

  /// Throws Error(ValidationError) on negative rates, bad cutoff, etc.
  void validate() const;
};

/// Empty-cavity drive strength E0 = sqrt(N_e (kappa^2 + Delta_c^2)).
double drive_amplitude(const SystemParams& params);

}  // namespace cavitytrap
