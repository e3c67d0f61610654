#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavitytrap/averages.hpp"
#include "cavitytrap/langevin.hpp"
#include "cavitytrap/params.hpp"

namespace cavitytrap {

/// Run configuration in human units, as written in a config file.
///
/// File format: one `key = value` per line, `#` starts a comment, lists are
/// comma separated. `preset` is applied first regardless of its position;
/// every other key overrides the preset. Unknown keys are rejected.
struct RunConfig {
  std::string preset;

  double g0_mhz = 30.0;
  double s0_mhz = 50.0;
  double kappa_mhz = 4.0;
  double gamma_mhz = 5.2;
  // omega_p - omega_a and omega_c - omega_p. The cavity is tuned to the atom
  // unless both are given; with neither, the probe sits 10 MHz below it.
  std::optional<double> probe_detuning_mhz;
  std::optional<double> delta_c_mhz;
  double drive_photons = 0.01;
  double lambda0_nm = 852.4;
  std::optional<double> lambdaF_nm;           // checked against n0 lambda0 / nF
  int n0 = 32;
  int nf = 30;
  double w0_um = 20.0;
  double mass_kg = kCs133Mass;
  int n_max = 4;
  TrapVariant trap_variant = TrapVariant::OppositeShift;
  std::vector<double> polarization{0.3, 0.3, 0.4};

  int well = 5;
  std::optional<double> zmin;  // lambdaF
  std::optional<double> zmax;  // lambdaF
  std::optional<int> nz;
  std::optional<int> nrho;
  double rho_max_w0 = 3.0;
  AveragingWindow window = AveragingWindow::FullWell;
  std::vector<double> saturation_ne{1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 3e-2, 5e-2, 1e-1};

  int n = 100;
  std::uint64_t seed = 1;
  double dt_ns = 20.0;
  double tmax_ms = 100.0;
  double z0_offset_lambdaF = 0.125;  // from the anti-node
  double x0_w0 = 0.0;
  double y0_w0 = 0.0;
  double vx_cm_s = -10.0;
  double vy_cm_s = 0.0;
  double vz_cm_s = 0.0;
  std::vector<int> series{0};
  int stride = 10;

  std::string out = "out";

  /// Resolved physical parameters (angular units, SI lengths); validated.
  SystemParams params() const;
  /// Trajectory template for the selected well.
  TrajectoryConfig trajectory(const SystemParams& params) const;

  /// Ordered key/value pairs whose re-parse reproduces this config exactly.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Preset names accepted by the `preset` key.
std::vector<std::string> preset_names();

/// Applies one key; throws ParseError for malformed values and
/// ValidationError for unknown keys.
void set_key(RunConfig& config, std::string_view key, std::string_view value);

/// Parses key/value text. Throws ParseError / ValidationError.
RunConfig parse_config_text(std::string_view text);

/// Reads a config file. A file starting with `{` is read as a run manifest
/// and its "config" object is used.
RunConfig parse_config(const std::filesystem::path& file);

/// Key/value text of a config (inverse of parse_config_text).
std::string format_config(const RunConfig& config);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace cavitytrap
