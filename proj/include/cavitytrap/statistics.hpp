#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cavitytrap/langevin.hpp"

namespace cavitytrap {

/// Empirical P(T) = fraction of trajectories trapped longer than T, evaluated
/// at 0 and at each sorted trapping time.
std::vector<SurvivalPoint> survival_function(std::span<const double> trapping_times);

/// P(T) sampled on a uniform grid of bin edges 0, width, 2 width, ... up to t_end.
std::vector<SurvivalPoint> survival_histogram(std::span<const double> trapping_times, double t_end,
                                              int bins);

struct TailOptions {
  double min_threshold = 1e-3;  // s
  double percentile = 0.30;     // of the trapped (>= min_threshold) times
  int min_count = 20;
  int bootstrap_samples = 200;  // resamples for the standard error
  std::uint64_t bootstrap_seed = 0x7a11f17;
};

/// Least-squares fit of log P(T) = a - T / tau over T >= T_tail, with
/// T_tail = max(min_threshold, percentile of trapped times). Censored
/// trajectories (TimeCap) count in P but contribute no fit points. Points are
/// weighted by the binomial variance of log P; the standard error is the
/// spread of tau over bootstrap resamples of the trajectories. Throws
/// InsufficientTail.
TailFit fit_survival_tail(std::span<const double> trapping_times, const std::vector<bool>& censored,
                          TailOptions options = {});

TailFit fit_survival_tail(const EnsembleStats& stats, TailOptions options = {});

/// Frequency (Hz) of the largest periodogram peak of a uniformly sampled
/// series within [f_lo, f_hi], scanned on n_freq points and refined by a
/// parabolic fit of the peak.
double dominant_frequency(std::span<const double> series, double sample_dt, double f_lo, double f_hi,
                          int n_freq = 2000);

}  // namespace cavitytrap
