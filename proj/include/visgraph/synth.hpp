#ifndef VISGRAPH_SYNTH_HPP
#define VISGRAPH_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "visgraph/error.hpp"
#include "visgraph/series.hpp"

namespace visgraph {

enum class SyntheticKind { fgn, white_noise, linear_ramp, constant };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::white_noise;
  double hurst = 0.5;  // fgn only
  std::size_t length = 0;
  std::uint64_t seed = 0;
};

inline const char* to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::fgn: return "fgn";
    case SyntheticKind::white_noise: return "white_noise";
    case SyntheticKind::linear_ramp: return "linear_ramp";
    case SyntheticKind::constant: return "constant";
  }
  return "unknown";
}

/// Autocovariance of unit-variance fractional Gaussian noise at integer lag k.
inline double fgn_autocovariance(double hurst, double lag) {
  const double h2 = 2.0 * hurst;
  const double k = std::fabs(lag);
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::fabs(k - 1.0), h2));
}

namespace detail {

// FFTW planning is not thread safe; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

inline FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer(p);
}

/// In-place forward DFT (sign -1) of n complex values.
inline void forward_dft(fftw_complex* data, std::size_t n) {
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Eigenvalues of the 2m x 2m circulant matrix whose first row is
/// [g(0), g(1), ..., g(m), g(m-1), ..., g(1)], g the fGn autocovariance.
inline std::vector<double> circulant_eigenvalues(double hurst, std::size_t m) {
  const std::size_t size = 2 * m;
  auto buf = detail::fftw_buffer(size);
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t lag = k <= m ? k : size - k;
    buf[k][0] = fgn_autocovariance(hurst, static_cast<double>(lag));
    buf[k][1] = 0.0;
  }
  detail::forward_dft(buf.get(), size);
  std::vector<double> eig(size);
  for (std::size_t k = 0; k < size; ++k) eig[k] = buf[k][0];
  return eig;
}

/// Exact fractional Gaussian noise by circulant embedding, unit variance.
/// The embedding half-size starts at the next power of two >= length and
/// doubles when the circulant has materially negative eigenvalues.
inline std::vector<double> fractional_gaussian_noise(double hurst, std::size_t length,
                                                     std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("fgn: hurst must lie in (0, 1)");
  if (length < 2) throw std::invalid_argument("fgn: length must be at least 2");

  std::size_t m = detail::next_power_of_two(length);
  std::vector<double> eig;
  for (int attempt = 0;; ++attempt) {
    eig = circulant_eigenvalues(hurst, m);
    const double largest = *std::max_element(eig.begin(), eig.end());
    const double smallest = *std::min_element(eig.begin(), eig.end());
    if (smallest >= -1e-10 * largest) break;
    if (attempt == 4)
      throw AnalysisError("fgn: circulant embedding is not nonnegative definite for H=" +
                          std::to_string(hurst));
    m *= 2;
  }

  const std::size_t size = 2 * m;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto buf = detail::fftw_buffer(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double scale = std::sqrt(std::max(eig[k], 0.0) / static_cast<double>(size));
    const double re = normal(rng);
    const double im = normal(rng);
    buf[k][0] = scale * re;
    buf[k][1] = scale * im;
  }
  detail::forward_dft(buf.get(), size);
  std::vector<double> out(length);
  for (std::size_t j = 0; j < length; ++j) out[j] = buf[j][0];
  return out;
}

inline TimeSeries generate(const SyntheticSpec& spec) {
  if (spec.length < 2) throw std::invalid_argument("generate: length must be at least 2");
  std::vector<double> values(spec.length);
  switch (spec.kind) {
    case SyntheticKind::constant:
      break;
    case SyntheticKind::linear_ramp:
      for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
      break;
    case SyntheticKind::white_noise: {
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (auto& v : values) v = normal(rng);
      break;
    }
    case SyntheticKind::fgn:
      values = fractional_gaussian_noise(spec.hurst, spec.length, spec.seed);
      break;
  }
  std::string label = to_string(spec.kind);
  if (spec.kind == SyntheticKind::fgn) label += "_H" + std::to_string(spec.hurst).substr(0, 4);
  return TimeSeries(std::move(values), std::move(label));
}

}  // namespace visgraph

#endif  // VISGRAPH_SYNTH_HPP
