#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "cavitytrap/coefficients.hpp"
#include "cavitytrap/geometry.hpp"

namespace cavitytrap {

/// Coefficients entering the equations of motion at one (z, rho) point.
struct LocalCoefficients {
  double F0_z = 0;     // N
  double F0_rho = 0;   // N, along the outward radial unit vector
  double beta_zz = 0;  // 1/s
  double D_zz = 0;     // m^2/s^3, cavity/FORT part
  double D_se_x = 0;   // m^2/s^3, also used for y
  double D_se_z = 0;   // m^2/s^3
  double photons = 0;
  double excitation = 0;
};

/// Axisymmetric table of coefficients over one well, on uniform (z, rho)
/// nodes. Immutable after build_grid.
class CoefficientGrid {
 public:
  CoefficientGrid() = default;
  CoefficientGrid(SystemParams params, int well_index, double z_lo, double z_hi, double rho_max,
                  int nz, int nrho);

  const SystemParams& params() const { return params_; }
  int well_index() const { return well_index_; }
  int nz() const { return nz_; }
  int nrho() const { return nrho_; }
  double z_lo() const { return z_lo_; }
  double z_hi() const { return z_hi_; }
  double rho_max() const { return rho_max_; }
  double z_node(int i) const { return z_lo_ + i * dz_; }
  double rho_node(int j) const { return j * drho_; }

  const LocalCoefficients& node(int i, int j) const { return nodes_[index(i, j)]; }
  LocalCoefficients& node(int i, int j) { return nodes_[index(i, j)]; }

  bool contains(double z, double rho) const {
    return z >= z_lo_ && z <= z_hi_ && rho >= 0.0 && rho <= rho_max_;
  }

  /// Bilinear interpolation; the caller guarantees contains(z, rho).
  LocalCoefficients at(double z, double rho) const;

  std::string build_timestamp;
  double build_seconds = 0;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nrho_ + j; }

  SystemParams params_;
  int well_index_ = 0;
  double z_lo_ = 0, z_hi_ = 0, rho_max_ = 0;
  int nz_ = 0, nrho_ = 0;
  double dz_ = 0, drho_ = 0;
  std::vector<LocalCoefficients> nodes_;
};

inline LocalCoefficients CoefficientGrid::at(double z, double rho) const {
  const double u = (z - z_lo_) / dz_;
  const double w = rho / drho_;
  int i = std::min(static_cast<int>(u), nz_ - 2);
  int j = std::min(static_cast<int>(w), nrho_ - 2);
  i = std::max(i, 0);
  j = std::max(j, 0);
  const double fu = u - i, fw = w - j;
  const double w00 = (1 - fu) * (1 - fw), w10 = fu * (1 - fw), w01 = (1 - fu) * fw, w11 = fu * fw;
  const auto& a = nodes_[index(i, j)];
  const auto& b = nodes_[index(i + 1, j)];
  const auto& c = nodes_[index(i, j + 1)];
  const auto& d = nodes_[index(i + 1, j + 1)];
  auto mix = [&](double LocalCoefficients::*f) {
    return w00 * a.*f + w10 * b.*f + w01 * c.*f + w11 * d.*f;
  };
  LocalCoefficients out;
  out.F0_z = mix(&LocalCoefficients::F0_z);
  out.F0_rho = mix(&LocalCoefficients::F0_rho);
  out.beta_zz = mix(&LocalCoefficients::beta_zz);
  out.D_zz = mix(&LocalCoefficients::D_zz);
  out.D_se_x = mix(&LocalCoefficients::D_se_x);
  out.D_se_z = mix(&LocalCoefficients::D_se_z);
  out.photons = mix(&LocalCoefficients::photons);
  out.excitation = mix(&LocalCoefficients::excitation);
  return out;
}

LocalCoefficients reduce_sample(const CoefficientSample& sample);

struct GridOptions {
  double rho_max_w0 = 3.0;  // radial extent in units of w0
  int workers = 0;          // 0: default_worker_count()
};

/// Tabulates CoefficientModel::sample over the well [z_center - lambdaF/4,
/// z_center + lambdaF/4] x [0, rho_max]. Solver errors are rethrown with the
/// node coordinates attached.
CoefficientGrid build_grid(const SystemParams& params, const WellDescriptor& well, int nz, int nrho,
                           GridOptions options = {});

/// CAVITYTRAP_WORKERS if set, otherwise the hardware concurrency.
int default_worker_count();

}  // namespace cavitytrap
