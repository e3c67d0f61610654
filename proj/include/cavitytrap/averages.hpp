#pragma once

#include <optional>
#include <vector>

#include "cavitytrap/coefficients.hpp"
#include "cavitytrap/grid.hpp"

namespace cavitytrap {

enum class AveragingWindow {
  FullWell,               // [z_n - lambdaF/4, z_n + lambdaF/4]
  TenthAroundEquilibrium  // lambdaF/10 centred on the equilibrium point
};

struct WellAverage {
  int well_index = 0;
  double z_equilibrium = 0;
  double window_lo = 0;
  double window_hi = 0;
  double beta_bar = 0;  // 1/s
  double D_bar = 0;     // m^2/s^3, includes D_se,z
  /// sqrt(D_bar / beta_bar); empty when beta_bar <= 0 (no cooling).
  std::optional<double> v_rms;
};

/// On-axis point near the anti-node where the mean axial force changes sign
/// from + to -; the anti-node itself if there is no such crossing.
double equilibrium_position(const CoefficientModel& model, const WellDescriptor& well);

/// Averages beta_zz and D_zz + D_se,z on the axis over the window, using
/// `samples` uniformly spaced points.
WellAverage well_average_vrms(const CoefficientModel& model, const WellDescriptor& well,
                              AveragingWindow window, int samples = 41);

/// Same from the rho = 0 row of a grid (trapezoidal over the nodes in the window).
WellAverage well_average_vrms(const CoefficientGrid& grid, const WellDescriptor& well,
                              AveragingWindow window);

struct SaturationRow {
  double drive_photons = 0;
  double beta_bar = 0;
  double D_bar = 0;
  std::optional<double> v_rms;
};

/// Well averages at each drive strength (ascending list).
std::vector<SaturationRow> saturation_scan(const std::vector<double>& drive_photons,
                                           const WellDescriptor& well, const SystemParams& params,
                                           AveragingWindow window = AveragingWindow::FullWell,
                                           int samples = 41);

/// Doppler-type floor sqrt(0.7 hbar Gamma / (2 m)) for the axial rms velocity.
double axial_doppler_velocity(const SystemParams& params);

}  // namespace cavitytrap
