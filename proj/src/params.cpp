#include "cavitytrap/params.hpp"

#include <cmath>
#include <string>

#include "cavitytrap/error.hpp"

namespace cavitytrap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateSteadyState: return "DegenerateSteadyState";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularSolve: return "SingularSolve";
    case ErrorKind::ImaginaryForce: return "ImaginaryForce";
    case ErrorKind::InsufficientTail: return "InsufficientTail";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Error";
}

const char* to_string(TrapVariant variant) {
  return variant == TrapVariant::OppositeShift ? "opposite" : "equal";
}

void SystemParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); };
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(g0) || !finite(S0) || !finite(kappa) || !finite(gamma) || !finite(delta_c) ||
      !finite(delta_a) || !finite(drive_photons) || !finite(lambda0) || !finite(w0) ||
      !finite(mass))
    fail("non-finite parameter");
  if (g0 < 0 || S0 < 0 || kappa < 0 || gamma < 0) fail("rates must be non-negative");
  if (drive_photons < 0) fail("drive_photons must be non-negative");
  if (photon_cutoff < 1) fail("photon_cutoff must be >= 1");
  if (lambda0 <= 0 || w0 <= 0 || mass <= 0) fail("lambda0, w0 and mass must be positive");
  if (n0 <= 0 || nF <= 0) fail("cavity half-wave counts must be positive");
  if ((polarization_factors.array() < 0).any()) fail("polarization factors must be >= 0");
}

double drive_amplitude(const SystemParams& params) {
  return std::sqrt(params.drive_photons *
                   (params.kappa * params.kappa + params.delta_c * params.delta_c));
}

}  // namespace cavitytrap
