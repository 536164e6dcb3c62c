#ifndef VISGRAPH_METRICS_HPP
#define VISGRAPH_METRICS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "visgraph/dfa.hpp"
#include "visgraph/error.hpp"
#include "visgraph/graph.hpp"
#include "visgraph/parallel.hpp"
#include "visgraph/regression.hpp"
#include "visgraph/rng.hpp"
#include "visgraph/series.hpp"
#include "visgraph/visibility.hpp"

namespace visgraph {

// ---------------------------------------------------------------------------
// Global statistics

struct GlobalStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double density = 0.0;
  double average_degree = 0.0;
  std::size_t max_degree = 0;
};

inline GlobalStats global_stats(const Graph& g) {
  GlobalStats s;
  s.node_count = g.node_count();
  s.edge_count = g.edge_count();
  const auto n = static_cast<double>(s.node_count);
  const auto m = static_cast<double>(s.edge_count);
  s.density = s.node_count > 1 ? 2.0 * m / (n * (n - 1.0)) : 0.0;
  s.average_degree = s.node_count > 0 ? 2.0 * m / n : 0.0;
  for (std::size_t i = 0; i < s.node_count; ++i) s.max_degree = std::max(s.max_degree, g.degree(i));
  return s;
}

// ---------------------------------------------------------------------------
// Clustering

/// Per-node triangle counts and clustering coefficients in node order.
/// c_i = 2 T_i / (k_i (k_i - 1)), and 0 for nodes of degree < 2.
struct ClusteringReport {
  std::vector<std::size_t> degree;
  std::vector<std::uint64_t> triangles;
  std::vector<double> coefficient;
  double average = 0.0;
};

inline ClusteringReport clustering(const Graph& g) {
  const std::size_t n = g.node_count();
  ClusteringReport r;
  r.degree = g.degrees();
  r.triangles.assign(n, 0);
  r.coefficient.assign(n, 0.0);
  // Each triangle at i is seen once through each of its two edges at i.
  for (std::size_t i = 0; i < n; ++i) {
    const auto ni = g.neighbors(i);
    for (const NodeId j : ni) {
      if (j <= i) continue;
      const auto nj = g.neighbors(j);
      std::uint64_t common = 0;
      auto a = ni.begin();
      auto b = nj.begin();
      while (a != ni.end() && b != nj.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++common;
          ++a;
          ++b;
        }
      }
      r.triangles[i] += common;
      r.triangles[j] += common;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r.triangles[i] /= 2;
    const double k = static_cast<double>(r.degree[i]);
    if (r.degree[i] >= 2) r.coefficient[i] = 2.0 * static_cast<double>(r.triangles[i]) / (k * (k - 1.0));
    sum += r.coefficient[i];
  }
  r.average = n > 0 ? sum / static_cast<double>(n) : 0.0;
  return r;
}

struct ClusteringRelationOptions {
  /// Upper degree bound for the log-log pairs; 0 keeps every degree.
  std::size_t loglog_max_degree = 0;
};

/// Point sets for ln c_i ~ ln k_i and 1/c_i ~ k_i. Nodes with c_i = 0 or
/// k_i < 2 have no logarithm or reciprocal and are counted as excluded.
struct ClusteringRelation {
  std::vector<double> ln_k, ln_c;
  std::vector<double> k, inverse_c;
  std::size_t excluded_loglog = 0;
  std::size_t excluded_inverse = 0;
};

inline ClusteringRelation clustering_degree_relation(const ClusteringReport& report,
                                                     const ClusteringRelationOptions& options = {}) {
  ClusteringRelation rel;
  for (std::size_t i = 0; i < report.degree.size(); ++i) {
    const std::size_t k = report.degree[i];
    const double c = report.coefficient[i];
    const bool defined = k >= 2 && c > 0.0;
    if (defined && (options.loglog_max_degree == 0 || k <= options.loglog_max_degree)) {
      rel.ln_k.push_back(std::log(static_cast<double>(k)));
      rel.ln_c.push_back(std::log(c));
    } else {
      ++rel.excluded_loglog;
    }
    if (defined) {
      rel.k.push_back(static_cast<double>(k));
      rel.inverse_c.push_back(1.0 / c);
    } else {
      ++rel.excluded_inverse;
    }
  }
  if (rel.ln_k.size() < 3 || rel.k.size() < 3)
    throw AnalysisError("clustering relation: fewer than 3 nodes with k >= 2 and c > 0");
  return rel;
}

struct DegreeCurvePoint {
  std::size_t k = 0;
  double mean = 0.0;
  std::size_t count = 0;
};

/// Mean clustering coefficient per degree, over nodes of degree >= 2.
inline std::vector<DegreeCurvePoint> clustering_curve(const ClusteringReport& report) {
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (std::size_t i = 0; i < report.degree.size(); ++i) {
    if (report.degree[i] < 2) continue;
    auto& [sum, count] = acc[report.degree[i]];
    sum += report.coefficient[i];
    ++count;
  }
  std::vector<DegreeCurvePoint> out;
  for (const auto& [k, sc] : acc) out.push_back({k, sc.first / static_cast<double>(sc.second), sc.second});
  return out;
}

// ---------------------------------------------------------------------------
// Shortest paths

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Hop distances from one source; kUnreachable for other components.
inline std::vector<std::uint32_t> bfs_distances(const Graph& g, std::size_t source) {
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    for (const NodeId u : g.neighbors(v)) {
      if (dist[u] != kUnreachable) continue;
      dist[u] = dist[v] + 1;
      q.push(u);
    }
  }
  return dist;
}

/// Average over connected node pairs plus how many pairs were connected.
struct PathLengthSummary {
  double average = 0.0;
  std::uint64_t distance_sum = 0;     // over unordered connected pairs
  std::uint64_t connected_pairs = 0;  // unordered
  std::uint64_t total_pairs = 0;      // N (N - 1) / 2

  double connected_fraction() const {
    return total_pairs == 0 ? 0.0 : static_cast<double>(connected_pairs) / static_cast<double>(total_pairs);
  }
};

namespace detail {

inline constexpr std::size_t kLaneWords = 4;
inline constexpr std::size_t kLaneBits = 64 * kLaneWords;

struct Lanes {
  std::uint64_t w[kLaneWords];
};

struct BatchTotals {
  std::uint64_t distance_sum = 0;
  std::uint64_t reached = 0;
};

// Breadth-first search from up to kLaneBits sources at once; bit b of a
// node's word set belongs to source first + b. Sums are over ordered pairs.
inline BatchTotals bfs_batch(const Graph& g, std::size_t first, std::size_t count) {
  const std::size_t n = g.node_count();
  std::vector<Lanes> visited(n), frontier(n), next(n);
  Lanes full{};
  for (std::size_t b = 0; b < count; ++b) {
    const std::size_t s = first + b;
    visited[s].w[b / 64] |= 1ULL << (b % 64);
    frontier[s].w[b / 64] |= 1ULL << (b % 64);
    full.w[b / 64] |= 1ULL << (b % 64);
  }
  BatchTotals totals;
  for (std::uint64_t depth = 1;; ++depth) {
    std::uint64_t fresh = 0;
    for (std::size_t v = 0; v < n; ++v) {
      Lanes& out = next[v];
      const Lanes& seen = visited[v];
      bool saturated = true;
      for (std::size_t w = 0; w < kLaneWords; ++w) saturated &= seen.w[w] == full.w[w];
      if (saturated) {
        out = Lanes{};
        continue;
      }
      Lanes acc{};
      for (const NodeId u : g.neighbors(v))
        for (std::size_t w = 0; w < kLaneWords; ++w) acc.w[w] |= frontier[u].w[w];
      for (std::size_t w = 0; w < kLaneWords; ++w) {
        out.w[w] = acc.w[w] & ~seen.w[w];
        fresh += static_cast<std::uint64_t>(std::popcount(out.w[w]));
      }
    }
    if (fresh == 0) break;
    totals.distance_sum += depth * fresh;
    totals.reached += fresh;
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < kLaneWords; ++w) visited[v].w[w] |= next[v].w[w];
    std::swap(frontier, next);
  }
  return totals;
}

}  // namespace detail

/// All-pairs hop distances by bit-parallel BFS. Integer accumulation keeps
/// the result independent of the worker count.
inline PathLengthSummary path_length_summary(const Graph& g, unsigned workers = worker_count()) {
  const std::size_t n = g.node_count();
  PathLengthSummary s;
  s.total_pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (n < 2) return s;
  const std::size_t batches = (n + detail::kLaneBits - 1) / detail::kLaneBits;
  std::vector<detail::BatchTotals> per_batch(batches);
  parallel_for(
      batches,
      [&](std::size_t b) {
        const std::size_t first = b * detail::kLaneBits;
        per_batch[b] = detail::bfs_batch(g, first, std::min(detail::kLaneBits, n - first));
      },
      workers);
  std::uint64_t sum = 0, reached = 0;
  for (const auto& t : per_batch) {
    sum += t.distance_sum;
    reached += t.reached;
  }
  s.distance_sum = sum / 2;
  s.connected_pairs = reached / 2;
  s.average = s.connected_pairs == 0
                  ? 0.0
                  : static_cast<double>(s.distance_sum) / static_cast<double>(s.connected_pairs);
  return s;
}

/// L = 2 / (N (N - 1)) * sum_{i<j} d(i, j), taken over connected pairs.
inline double avg_shortest_path(const Graph& g) { return path_length_summary(g).average; }

// ---------------------------------------------------------------------------
// Small-world scan

struct SmallWorldPoint {
  std::size_t length = 0;        // N
  double mean_path_length = 0.0; // mean L over windows
  std::size_t windows = 0;       // floor(T / N)
};

struct SmallWorldScan {
  std::vector<SmallWorldPoint> points;
  LinearFit fit_all;                  // L on log10 N
  std::optional<LinearFit> fit_small; // restricted to N <= small_limit
  std::size_t small_limit = 500;
};

/// Unique integers, log-spaced on [lo, hi].
inline std::vector<std::size_t> default_window_lengths(std::size_t series_length, std::size_t count = 50,
                                                       std::size_t lo = 10) {
  return log_spaced_scales(lo, series_length, count);
}

inline SmallWorldScan small_world_scan(const TimeSeries& series, std::span<const std::size_t> lengths,
                                       std::size_t small_limit = 500) {
  if (lengths.empty()) throw std::invalid_argument("small_world_scan: no window lengths");
  for (const auto n : lengths)
    if (n < 10 || n > series.size())
      throw std::invalid_argument("small_world_scan: window length " + std::to_string(n) +
                                  " outside [10, " + std::to_string(series.size()) + "]");
  SmallWorldScan scan;
  scan.small_limit = small_limit;
  for (const auto n : lengths) {
    const std::size_t windows = series.size() / n;
    std::vector<double> per_window(windows);
    parallel_for(windows, [&](std::size_t w) {
      const auto g = build_vg_dc(slice(series, w * n, n));
      per_window[w] = path_length_summary(g, 1).average;
    });
    double sum = 0.0;
    for (const double l : per_window) sum += l;
    scan.points.push_back({n, sum / static_cast<double>(windows), windows});
  }
  std::vector<double> lg_all, l_all, lg_small, l_small;
  for (const auto& p : scan.points) {
    const double lg = std::log10(static_cast<double>(p.length));
    lg_all.push_back(lg);
    l_all.push_back(p.mean_path_length);
    if (p.length <= small_limit) {
      lg_small.push_back(lg);
      l_small.push_back(p.mean_path_length);
    }
  }
  if (lg_all.size() < 3) throw AnalysisError("small_world_scan: need at least 3 window lengths to fit");
  scan.fit_all = ols(lg_all, l_all);
  if (lg_small.size() >= 3) scan.fit_small = ols(lg_small, l_small);
  return scan;
}

// ---------------------------------------------------------------------------
// Null model

/// Uniform simple graph with exactly m edges.
inline Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  const std::uint64_t total = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > total)
    throw std::invalid_argument("random_gnm: " + std::to_string(m) + " edges exceed the " +
                                std::to_string(total) + " possible");
  std::mt19937_64 rng(seed);
  // Sample whichever of the edge set or its complement is smaller.
  const bool complement = m > total / 2;
  const std::uint64_t draws = complement ? total - m : m;
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(draws * 2);
  std::vector<Edge> edges;
  edges.reserve(m);
  while (chosen.size() < draws) {
    const auto a = pick(rng);
    const auto b = pick(rng);
    if (a == b) continue;
    const auto lo = std::min(a, b), hi = std::max(a, b);
    if (chosen.insert(lo * n + hi).second && !complement) edges.push_back({NodeId(lo), NodeId(hi)});
  }
  if (complement) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!chosen.contains(static_cast<std::uint64_t>(i) * n + j)) edges.push_back({NodeId(i), NodeId(j)});
  }
  return Graph::from_edges(n, edges);
}

struct NullModelComparison {
  double path_length_actual = 0.0;
  double path_length_random = 0.0;
  double clustering_actual = 0.0;
  double clustering_random = 0.0;
  double random_connected_fraction = 1.0;  // mean over realizations
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
};

/// Compares L and C against G(N, M) graphs with the same node and edge counts.
/// Realization r uses seed derive_seed(seed, r).
inline NullModelComparison null_model_compare(const Graph& g, std::size_t realizations,
                                              std::uint64_t seed) {
  if (realizations < 1) throw std::invalid_argument("null_model_compare: realizations must be >= 1");
  NullModelComparison out;
  out.realizations = realizations;
  out.seed = seed;
  out.path_length_actual = path_length_summary(g).average;
  out.clustering_actual = clustering(g).average;
  double l_sum = 0.0, c_sum = 0.0, f_sum = 0.0;
  for (std::size_t r = 0; r < realizations; ++r) {
    const auto rg = random_gnm(g.node_count(), g.edge_count(), derive_seed(seed, r));
    const auto paths = path_length_summary(rg);
    l_sum += paths.average;
    f_sum += paths.connected_fraction();
    c_sum += clustering(rg).average;
  }
  const auto count = static_cast<double>(realizations);
  out.path_length_random = l_sum / count;
  out.clustering_random = c_sum / count;
  out.random_connected_fraction = f_sum / count;
  return out;
}

// ---------------------------------------------------------------------------
// Mixing

/// Degree assortativity over edge endpoints, each edge counted in both
/// orientations. Empty when the endpoint degree variance is zero.
inline std::optional<double> assortativity(const Graph& g) {
  if (g.edge_count() == 0) throw std::invalid_argument("assortativity: graph has no edges");
  __int128 s1 = 0, s2 = 0, prod = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto ki = static_cast<__int128>(g.degree(i));
    for (const NodeId j : g.neighbors(i)) {
      if (j <= i) continue;
      const auto kj = static_cast<__int128>(g.degree(j));
      s1 += ki + kj;
      s2 += ki * ki + kj * kj;
      prod += ki * kj;
    }
  }
  const auto m = static_cast<__int128>(g.edge_count());
  // r = (4 M P - S1^2) / (2 M S2 - S1^2), exact in integers up to the final division.
  const __int128 numerator = 4 * m * prod - s1 * s1;
  const __int128 denominator = 2 * m * s2 - s1 * s1;
  if (denominator == 0) return std::nullopt;
  return std::clamp(static_cast<double>(numerator) / static_cast<double>(denominator), -1.0, 1.0);
}

struct MixingReport {
  std::optional<double> assortativity;
  std::vector<double> knn;                       // per node; 0 for isolated nodes
  std::vector<std::uint64_t> neighbor_degree_sum; // per node, exact
  std::vector<DegreeCurvePoint> curve;            // (k, <k_nn | k>, N_k)
  std::size_t isolated_nodes = 0;
};

inline MixingReport knn_curve(const Graph& g) {
  MixingReport r;
  const std::size_t n = g.node_count();
  r.knn.assign(n, 0.0);
  r.neighbor_degree_sum.assign(n, 0);
  if (g.edge_count() > 0) r.assortativity = assortativity(g);
  std::map<std::size_t, std::pair<double, std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = g.degree(i);
    if (k == 0) {
      ++r.isolated_nodes;
      continue;
    }
    std::uint64_t sum = 0;
    for (const NodeId j : g.neighbors(i)) sum += g.degree(j);
    r.neighbor_degree_sum[i] = sum;
    r.knn[i] = static_cast<double>(sum) / static_cast<double>(k);
    auto& [acc, count] = groups[k];
    acc += r.knn[i];
    ++count;
  }
  for (const auto& [k, ac] : groups) r.curve.push_back({k, ac.first / static_cast<double>(ac.second), ac.second});
  return r;
}

}  // namespace visgraph

#endif  // VISGRAPH_METRICS_HPP
