#include "cavitytrap/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "cavitytrap/error.hpp"

namespace cavitytrap {

std::vector<SurvivalPoint> survival_function(std::span<const double> trapping_times) {
  std::vector<double> t(trapping_times.begin(), trapping_times.end());
  std::sort(t.begin(), t.end());
  const double n = static_cast<double>(t.size());
  std::vector<SurvivalPoint> out;
  out.reserve(t.size() + 1);
  out.push_back({0.0, 1.0});
  for (std::size_t i = 0; i < t.size(); ++i) {
    // Ties: report the value after the last tied event.
    if (i + 1 < t.size() && t[i + 1] == t[i]) continue;
    out.push_back({t[i], (n - static_cast<double>(i + 1)) / n});
  }
  return out;
}

std::vector<SurvivalPoint> survival_histogram(std::span<const double> trapping_times, double t_end,
                                              int bins) {
  std::vector<double> t(trapping_times.begin(), trapping_times.end());
  std::sort(t.begin(), t.end());
  const double n = static_cast<double>(t.size());
  std::vector<SurvivalPoint> out;
  out.reserve(bins + 1);
  for (int b = 0; b <= bins; ++b) {
    const double T = t_end * b / bins;
    const auto above = t.end() - std::upper_bound(t.begin(), t.end(), T);
    out.push_back({T, n > 0 ? static_cast<double>(above) / n : 0.0});
  }
  return out;
}

namespace {

/// Weighted least-squares slope of log P(T) = a + b T over the uncensored
/// events at T >= t_tail; var(log P) = (1 - P) / (n P). Empty if degenerate.
std::optional<double> tail_slope(std::span<const double> times, const std::vector<bool>& censored,
                                 double t_tail) {
  const std::size_t n = times.size();
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> events;
  for (std::size_t i = 0; i < n; ++i)
    if (!censored[i] && times[i] >= t_tail) events.push_back(times[i]);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  int points = 0;
  for (double T : events) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), T);
    const double P = static_cast<double>(above) / n;
    if (P <= 0.0 || P >= 1.0) continue;
    const double w = n * P / (1.0 - P);
    const double y = std::log(P);
    sw += w;
    swx += w * T;
    swy += w * y;
    swxx += w * T * T;
    swxy += w * T * y;
    ++points;
  }
  const double det = sw * swxx - swx * swx;
  if (points < 2 || !(det > 0)) return std::nullopt;
  const double slope = (sw * swxy - swx * swy) / det;
  if (!(slope < 0)) return std::nullopt;
  return slope;
}

}  // namespace

TailFit fit_survival_tail(std::span<const double> trapping_times, const std::vector<bool>& censored,
                          TailOptions options) {
  const std::size_t n = trapping_times.size();
  if (censored.size() != n)
    throw Error(ErrorKind::ValidationError, "censoring flags do not match the trapping times");
  std::vector<double> trapped;
  for (double t : trapping_times)
    if (t >= options.min_threshold) trapped.push_back(t);
  std::sort(trapped.begin(), trapped.end());

  double t_tail = options.min_threshold;
  if (!trapped.empty()) {
    const auto k = static_cast<std::size_t>(options.percentile * (trapped.size() - 1));
    t_tail = std::max(t_tail, trapped[k]);
  }
  const auto n_tail = std::count_if(trapped.begin(), trapped.end(),
                                    [&](double t) { return t >= t_tail; });
  if (n_tail < options.min_count) {
    std::ostringstream msg;
    msg << n_tail << " trajectories above T_tail = " << t_tail << " s, need "
        << options.min_count;
    throw Error(ErrorKind::InsufficientTail, msg.str());
  }

  const auto slope = tail_slope(trapping_times, censored, t_tail);
  if (!slope) throw Error(ErrorKind::InsufficientTail, "no decaying tail to fit");

  // Points of an empirical survival curve are strongly correlated, so the
  // standard error comes from resampling trajectories rather than from the
  // pointwise weights.
  std::mt19937_64 rng(options.bootstrap_seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> times(n);
  std::vector<bool> flags(n);
  double sum = 0, sum2 = 0;
  int good = 0;
  for (int r = 0; r < options.bootstrap_samples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = pick(rng);
      times[i] = trapping_times[j];
      flags[i] = censored[j];
    }
    if (const auto b = tail_slope(times, flags, t_tail)) {
      const double tau = -1.0 / *b;
      sum += tau;
      sum2 += tau * tau;
      ++good;
    }
  }

  TailFit fit;
  fit.tau = -1.0 / *slope;
  if (good > 1) {
    const double mean = sum / good;
    fit.stderr_tau = std::sqrt(std::max(0.0, (sum2 - good * mean * mean) / (good - 1)));
  }
  fit.t_tail = t_tail;
  fit.n_tail = static_cast<int>(n_tail);
  return fit;
}

TailFit fit_survival_tail(const EnsembleStats& stats, TailOptions options) {
  const std::size_t n = stats.trajectories.size();
  std::vector<double> times(n);
  std::vector<bool> censored(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = stats.trajectories[i].trapping_time;
    censored[i] = stats.trajectories[i].exit_reason == ExitReason::TimeCap;
  }
  return fit_survival_tail(times, censored, options);
}

double dominant_frequency(std::span<const double> series, double sample_dt, double f_lo, double f_hi,
                          int n_freq) {
  const std::size_t n = series.size();
  if (n < 4 || n_freq < 3) return 0.0;
  if (!(f_hi > f_lo) || f_hi > 0.5 / sample_dt)
    throw Error(ErrorKind::ValidationError, "frequency window must lie below the Nyquist frequency");
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  auto power = [&](double f) {
    // Recurrence for exp(-i 2 pi f k dt).
    const std::complex<double> rot = std::polar(1.0, -2.0 * kPi * f * sample_dt);
    std::complex<double> phase(1.0, 0.0), acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      acc += (series[k] - mean) * phase;
      phase *= rot;
      if ((k & 1023) == 1023) phase /= std::abs(phase);
    }
    return std::norm(acc);
  };
  const double df = (f_hi - f_lo) / (n_freq - 1);
  std::vector<double> p(n_freq);
  for (int i = 0; i < n_freq; ++i) p[i] = power(f_lo + i * df);
  const int best = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  double f = f_lo + best * df;
  if (best > 0 && best < n_freq - 1) {
    const double a = p[best - 1], b = p[best], c = p[best + 1];
    const double denom = a - 2 * b + c;
    if (denom != 0) f += 0.5 * df * (a - c) / denom;
  }
  return f;
}

}  // namespace cavitytrap
