#ifndef VISGRAPH_VISIBILITY_HPP
#define VISGRAPH_VISIBILITY_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "visgraph/graph.hpp"
#include "visgraph/series.hpp"

// Natural visibility: points (i, x_i) and (j, x_j) see each other when every
// intermediate point lies strictly below the chord joining them. Points on
// the chord block, so constant and linear series give path graphs.

namespace visgraph {

/// Chord test for i < j, evaluated literally point by point.
inline bool visible(std::span<const double> x, std::size_t i, std::size_t j) {
  if (i >= j || j >= x.size()) throw std::invalid_argument("visible: need i < j < length");
  const double ti = static_cast<double>(i);
  const double tj = static_cast<double>(j);
  for (std::size_t k = i + 1; k < j; ++k) {
    const double tk = static_cast<double>(k);
    if (!(x[k] < x[j] + (x[i] - x[j]) * (tj - tk) / (tj - ti))) return false;
  }
  return true;
}

inline bool visible(const TimeSeries& series, std::size_t i, std::size_t j) {
  return visible(series.values(), i, j);
}

/// Reference constructor: tests every pair with the chord test. O(T^3).
inline VisibilityGraph build_vg_oracle(const TimeSeries& series) {
  const auto x = series.values();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (visible(x, i, j)) edges.push_back({NodeId(i), NodeId(j)});
  return Graph::from_edges(x.size(), edges);
}

namespace detail {

// j is visible from anchor a (a < j) iff the slope a->j strictly exceeds
// every slope a->k for a < k < j.
template <class Emit>
void sweep_right(std::span<const double> x, std::size_t anchor, std::size_t last, Emit&& emit) {
  double max_slope = -std::numeric_limits<double>::infinity();
  const double xa = x[anchor];
  for (std::size_t j = anchor + 1; j <= last; ++j) {
    const double s = (x[j] - xa) / static_cast<double>(j - anchor);
    if (s > max_slope) {
      emit(anchor, j);
      max_slope = s;
    }
  }
}

// Mirror image: k < anchor is visible iff the slope measured leftward from
// the anchor strictly exceeds all slopes to points between them.
template <class Emit>
void sweep_left(std::span<const double> x, std::size_t anchor, std::size_t first, Emit&& emit) {
  double max_slope = -std::numeric_limits<double>::infinity();
  const double xa = x[anchor];
  for (std::size_t k = anchor; k-- > first;) {
    const double s = (x[k] - xa) / static_cast<double>(anchor - k);
    if (s > max_slope) {
      emit(k, anchor);
      max_slope = s;
    }
  }
}

}  // namespace detail

/// Slope sweep from every anchor. O(T^2) time, O(1) extra memory per anchor.
inline VisibilityGraph build_vg_sweep(const TimeSeries& series) {
  const auto x = series.values();
  std::vector<Edge> edges;
  edges.reserve(x.size() * 4);
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    detail::sweep_right(x, i, x.size() - 1,
                        [&](std::size_t a, std::size_t b) { edges.push_back({NodeId(a), NodeId(b)}); });
  return Graph::from_edges(x.size(), edges);
}

/// Divide and conquer on the range maximum. The maximum of a range blocks
/// every chord crossing it, so it is linked to what it sees in the range and
/// the two sides are processed independently. Uses an explicit work list.
inline VisibilityGraph build_vg_dc(const TimeSeries& series) {
  const auto x = series.values();
  std::vector<Edge> edges;
  edges.reserve(x.size() * 4);
  auto emit = [&](std::size_t a, std::size_t b) { edges.push_back({NodeId(a), NodeId(b)}); };

  std::vector<std::pair<std::size_t, std::size_t>> work{{0, x.size() - 1}};
  while (!work.empty()) {
    const auto [lo, hi] = work.back();
    work.pop_back();
    std::size_t top = lo;
    for (std::size_t k = lo + 1; k <= hi; ++k)
      if (x[k] > x[top]) top = k;
    if (top < hi) detail::sweep_right(x, top, hi, emit);
    if (top > lo) detail::sweep_left(x, top, lo, emit);
    if (top > lo + 1) work.emplace_back(lo, top - 1);
    if (top + 1 < hi) work.emplace_back(top + 1, hi);
  }
  return Graph::from_edges(x.size(), edges);
}

enum class VgAlgorithm { oracle, sweep, dc };

inline VgAlgorithm parse_vg_algorithm(std::string_view name) {
  if (name == "oracle") return VgAlgorithm::oracle;
  if (name == "sweep") return VgAlgorithm::sweep;
  if (name == "dc") return VgAlgorithm::dc;
  throw std::invalid_argument("unknown visibility algorithm '" + std::string(name) + "'");
}

inline const char* to_string(VgAlgorithm algo) {
  switch (algo) {
    case VgAlgorithm::oracle: return "oracle";
    case VgAlgorithm::sweep: return "sweep";
    case VgAlgorithm::dc: return "dc";
  }
  return "unknown";
}

inline VisibilityGraph build_vg(const TimeSeries& series, VgAlgorithm algo = VgAlgorithm::dc) {
  switch (algo) {
    case VgAlgorithm::oracle: return build_vg_oracle(series);
    case VgAlgorithm::sweep: return build_vg_sweep(series);
    case VgAlgorithm::dc: return build_vg_dc(series);
  }
  throw std::invalid_argument("build_vg: bad algorithm");
}

}  // namespace visgraph

#endif  // VISGRAPH_VISIBILITY_HPP
