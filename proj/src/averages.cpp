#include "cavitytrap/averages.hpp"

#include <cmath>

#include "cavitytrap/error.hpp"

namespace cavitytrap {

namespace {

double axial_force(const CoefficientModel& model, double z) {
  return model.sample({0.0, 0.0, z}, {.friction = false, .diffusion = false}).steady.mean_force.z();
}

std::optional<double> rms_from(double beta_bar, double D_bar) {
  if (beta_bar > 0.0) return std::sqrt(D_bar / beta_bar);
  return std::nullopt;
}

}  // namespace

double equilibrium_position(const CoefficientModel& model, const WellDescriptor& well) {
  const double half = model.params().lambdaF() / 8.0;
  double lo = well.z_center - half, hi = well.z_center + half;
  double f_lo = axial_force(model, lo), f_hi = axial_force(model, hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) return well.z_center;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = axial_force(model, mid);
    if (f > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

WellAverage well_average_vrms(const CoefficientModel& model, const WellDescriptor& well,
                              AveragingWindow window, int samples) {
  WellAverage avg;
  avg.well_index = well.index;
  const double lf = model.params().lambdaF();
  if (window == AveragingWindow::FullWell) {
    avg.z_equilibrium = equilibrium_position(model, well);
    avg.window_lo = well.z_lo;
    avg.window_hi = well.z_hi;
  } else {
    avg.z_equilibrium = equilibrium_position(model, well);
    avg.window_lo = avg.z_equilibrium - lf / 20.0;
    avg.window_hi = avg.z_equilibrium + lf / 20.0;
  }
  for (int i = 0; i < samples; ++i) {
    const double z = avg.window_lo + (avg.window_hi - avg.window_lo) * i / (samples - 1);
    const auto s = model.sample({0.0, 0.0, z}, {.friction = true, .diffusion = true});
    avg.beta_bar += s.beta(2, 2);
    avg.D_bar += s.D(2, 2) + s.D_se(2);
  }
  avg.beta_bar /= samples;
  avg.D_bar /= samples;
  avg.v_rms = rms_from(avg.beta_bar, avg.D_bar);
  return avg;
}

WellAverage well_average_vrms(const CoefficientGrid& grid, const WellDescriptor& well,
                              AveragingWindow window) {
  WellAverage avg;
  avg.well_index = well.index;
  const double lf = grid.params().lambdaF();
  // Equilibrium from the sign change of F0_z along the axis row.
  avg.z_equilibrium = well.z_center;
  for (int i = 0; i + 1 < grid.nz(); ++i) {
    const double f0 = grid.node(i, 0).F0_z, f1 = grid.node(i + 1, 0).F0_z;
    const double z0 = grid.z_node(i), z1 = grid.z_node(i + 1);
    if (f0 > 0.0 && f1 <= 0.0 && std::abs(0.5 * (z0 + z1) - well.z_center) < lf / 8.0) {
      avg.z_equilibrium = z0 + (z1 - z0) * f0 / (f0 - f1);
      break;
    }
  }
  if (window == AveragingWindow::FullWell) {
    avg.window_lo = well.z_lo;
    avg.window_hi = well.z_hi;
  } else {
    avg.window_lo = avg.z_equilibrium - lf / 20.0;
    avg.window_hi = avg.z_equilibrium + lf / 20.0;
  }
  double wsum = 0;
  for (int i = 0; i < grid.nz(); ++i) {
    const double z = grid.z_node(i);
    if (z < avg.window_lo - 1e-15 || z > avg.window_hi + 1e-15) continue;
    const auto& c = grid.node(i, 0);
    avg.beta_bar += c.beta_zz;
    avg.D_bar += c.D_zz + c.D_se_z;
    wsum += 1.0;
  }
  if (wsum == 0.0) throw Error(ErrorKind::ValidationError, "averaging window holds no grid nodes");
  avg.beta_bar /= wsum;
  avg.D_bar /= wsum;
  avg.v_rms = rms_from(avg.beta_bar, avg.D_bar);
  return avg;
}

std::vector<SaturationRow> saturation_scan(const std::vector<double>& drive_photons,
                                           const WellDescriptor& well, const SystemParams& params,
                                           AveragingWindow window, int samples) {
  for (std::size_t i = 1; i < drive_photons.size(); ++i)
    if (!(drive_photons[i] > drive_photons[i - 1]))
      throw Error(ErrorKind::ValidationError, "saturation scan needs an ascending N_e list");
  std::vector<SaturationRow> rows;
  for (double ne : drive_photons) {
    SystemParams p = params;
    p.drive_photons = ne;
    const CoefficientModel model(p);
    const auto avg = well_average_vrms(model, well, window, samples);
    rows.push_back({ne, avg.beta_bar, avg.D_bar, avg.v_rms});
  }
  return rows;
}

double axial_doppler_velocity(const SystemParams& params) {
  return std::sqrt(0.7 * kHbar * params.gamma / (2.0 * params.mass));
}

}  // namespace cavitytrap
