#ifndef VISGRAPH_DFA_HPP
#define VISGRAPH_DFA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "visgraph/error.hpp"
#include "visgraph/parallel.hpp"
#include "visgraph/regression.hpp"
#include "visgraph/series.hpp"

namespace visgraph {

enum class DfaDirection { forward_only, both_ends };

/// Scale grid for DFA. max_scale == 0 means length / 4.
struct DfaConfig {
  std::size_t min_scale = 10;
  std::size_t max_scale = 0;
  std::size_t scale_count = 50;
  DfaDirection direction = DfaDirection::forward_only;
};

struct DfaPoint {
  std::size_t scale = 0;
  double fluctuation = 0.0;
};

enum class Persistence { anti_persistent, uncorrelated, persistent };

struct DfaResult {
  std::vector<DfaPoint> points;
  double hurst = 0.0;
  LinearFit fit;  // log10 F on log10 s

  Persistence persistence() const {
    if (hurst < 0.5) return Persistence::anti_persistent;
    if (hurst > 0.5) return Persistence::persistent;
    return Persistence::uncorrelated;
  }
};

inline const char* to_string(Persistence p) {
  switch (p) {
    case Persistence::anti_persistent: return "anti_persistent";
    case Persistence::uncorrelated: return "uncorrelated";
    case Persistence::persistent: return "persistent";
  }
  return "unknown";
}

/// Cumulative sum of deviations from the mean.
inline std::vector<double> profile(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("profile: length must be at least 2");
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }))
    return std::vector<double>(x.size(), 0.0);
  double mean = 0.0;
  for (const double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  std::vector<double> y(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] - mean;
    y[i] = acc;
  }
  return y;
}

inline std::vector<double> profile(const TimeSeries& series) { return profile(series.values()); }

namespace detail {

// Residual sum of squares of the least-squares line through y[0..s) against 0..s-1.
inline double segment_rss(const double* y, std::size_t s) {
  const double n = static_cast<double>(s);
  const double mean_u = (n - 1.0) / 2.0;
  double mean_y = 0.0;
  for (std::size_t u = 0; u < s; ++u) mean_y += y[u];
  mean_y /= n;
  double suy = 0.0, syy = 0.0;
  for (std::size_t u = 0; u < s; ++u) {
    const double du = static_cast<double>(u) - mean_u;
    const double dy = y[u] - mean_y;
    suy += du * dy;
    syy += dy * dy;
  }
  const double suu = n * (n * n - 1.0) / 12.0;
  return std::max(0.0, syy - suy * suy / suu);
}

// Mean squared residual over the n = floor(N/s) segments starting at `offset`.
inline double mean_square_residual(const std::vector<double>& y, std::size_t s, std::size_t offset) {
  const std::size_t segments = (y.size() - offset) / s;
  double rss = 0.0;
  for (std::size_t k = 0; k < segments; ++k) rss += segment_rss(y.data() + offset + k * s, s);
  return rss / static_cast<double>(segments * s);
}

}  // namespace detail

/// F(s) from a precomputed profile. Forward mode tiles from the start and drops
/// the remainder; both_ends also tiles from the tail and averages the two mean squares.
inline double fluctuation_from_profile(const std::vector<double>& y, std::size_t s,
                                       DfaDirection direction = DfaDirection::forward_only) {
  if (s < 4 || s > y.size() / 4)
    throw std::invalid_argument("fluctuation: scale " + std::to_string(s) + " outside [4, " +
                                std::to_string(y.size() / 4) + "]");
  double ms = detail::mean_square_residual(y, s, 0);
  if (direction == DfaDirection::both_ends) {
    const std::size_t tail_offset = y.size() % s;
    ms = 0.5 * (ms + detail::mean_square_residual(y, s, tail_offset));
  }
  return std::sqrt(ms);
}

inline double fluctuation(const TimeSeries& series, std::size_t s,
                          DfaDirection direction = DfaDirection::forward_only) {
  return fluctuation_from_profile(profile(series), s, direction);
}

/// Unique integer scales, log-spaced on [min_scale, max_scale].
inline std::vector<std::size_t> log_spaced_scales(std::size_t min_scale, std::size_t max_scale,
                                                  std::size_t count) {
  if (min_scale == 0 || min_scale >= max_scale || count < 2)
    throw std::invalid_argument("log_spaced_scales: need 0 < min < max and count >= 2");
  std::vector<std::size_t> out;
  const double lo = std::log(static_cast<double>(min_scale));
  const double hi = std::log(static_cast<double>(max_scale));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    auto v = static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo))));
    v = std::clamp(v, min_scale, max_scale);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

inline std::vector<std::size_t> dfa_scales(const DfaConfig& config, std::size_t length) {
  const std::size_t max_scale = config.max_scale == 0 ? length / 4 : config.max_scale;
  if (config.min_scale < 4) throw std::invalid_argument("dfa: min_scale must be >= 4");
  if (max_scale > length / 4)
    throw std::invalid_argument("dfa: max_scale must be <= length/4 = " + std::to_string(length / 4));
  if (config.min_scale >= max_scale)
    throw std::invalid_argument("dfa: min_scale must be < max_scale (series too short?)");
  if (config.scale_count < 10) throw std::invalid_argument("dfa: scale_count must be >= 10");
  auto scales = log_spaced_scales(config.min_scale, max_scale, config.scale_count);
  if (scales.size() < 3) throw std::invalid_argument("dfa: fewer than 3 distinct scales");
  return scales;
}

inline DfaResult estimate_hurst(const TimeSeries& series, const DfaConfig& config = {}) {
  const auto scales = dfa_scales(config, series.size());
  const auto y = profile(series);
  DfaResult result;
  result.points.resize(scales.size());
  parallel_for(scales.size(), [&](std::size_t i) {
    result.points[i] = {scales[i], fluctuation_from_profile(y, scales[i], config.direction)};
  });
  std::vector<double> log_s, log_f;
  for (const auto& p : result.points) {
    if (!(p.fluctuation > 0.0))
      throw AnalysisError("dfa: F(s) = 0 at scale " + std::to_string(p.scale) +
                          " (constant or perfectly linear input)");
    log_s.push_back(std::log10(static_cast<double>(p.scale)));
    log_f.push_back(std::log10(p.fluctuation));
  }
  result.fit = ols(log_s, log_f);
  result.hurst = result.fit.slope;
  return result;
}

}  // namespace visgraph

#endif  // VISGRAPH_DFA_HPP
