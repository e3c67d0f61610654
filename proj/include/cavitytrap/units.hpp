#pragma once

#include <numbers>

namespace cavitytrap {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kCs133Mass = 132.905451961 * kAtomicMassUnit;

/// Ordinary frequency in MHz to angular frequency in rad/s.
constexpr double mhz_to_angular(double mhz) { return 2.0 * kPi * 1e6 * mhz; }
constexpr double angular_to_mhz(double omega) { return omega / (2.0 * kPi * 1e6); }

}  // namespace cavitytrap
