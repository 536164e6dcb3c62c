// Independent reference computations used only by the test suites. None of
// these call into the library code paths they are compared against.
#ifndef VISGRAPH_TESTS_ORACLES_HPP
#define VISGRAPH_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "visgraph/graph.hpp"

namespace oracle {

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;

/// Visibility edges of an integer-valued series using exact integer
/// cross-multiplication: k blocks (i, j) iff (x_k - x_i)(j - i) >= (x_j - x_i)(k - i).
inline EdgeSet integer_visibility(const std::vector<long long>& x) {
  EdgeSet edges;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool ok = true;
      for (std::size_t k = i + 1; k < j && ok; ++k) {
        const long long lhs = (x[k] - x[i]) * static_cast<long long>(j - i);
        const long long rhs = (x[j] - x[i]) * static_cast<long long>(k - i);
        ok = lhs < rhs;
      }
      if (ok) edges.emplace(i, j);
    }
  }
  return edges;
}

inline EdgeSet edge_set(const visgraph::Graph& g) {
  EdgeSet s;
  for (const auto& e : g.edges()) s.emplace(e.u, e.v);
  return s;
}

/// All-pairs hop distances by Floyd-Warshall; unreachable pairs stay at max.
inline std::vector<std::vector<std::uint64_t>> floyd_warshall(const visgraph::Graph& g) {
  const std::size_t n = g.node_count();
  constexpr auto inf = std::numeric_limits<std::uint64_t>::max() / 4;
  std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (const auto j : g.neighbors(i)) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Distinct triangles by triple loop over node triples.
inline std::uint64_t brute_force_triangles(const visgraph::Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto j : g.neighbors(i)) adj[i][j] = true;
  std::uint64_t count = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (adj[a][b])
        for (std::size_t c = b + 1; c < n; ++c)
          if (adj[a][c] && adj[b][c]) ++count;
  return count;
}

/// Erdos-Renyi G(n, p) via independent coin flips; used to get varied graphs.
inline visgraph::Graph coin_flip_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<visgraph::Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) e.push_back({visgraph::NodeId(i), visgraph::NodeId(j)});
  return visgraph::Graph::from_edges(n, e);
}

/// Straightforward DFA: explicit profile, per-segment normal equations, forward tiling.
inline double naive_dfa_fluctuation(const std::vector<double>& x, std::size_t s) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> y(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) y[i] = (acc += x[i] - mean);
  const std::size_t segments = n / s;
  double total = 0.0;
  for (std::size_t k = 0; k < segments; ++k) {
    double su = 0, sy = 0, suu = 0, suy = 0;
    for (std::size_t u = 0; u < s; ++u) {
      const double t = static_cast<double>(u + 1);
      const double v = y[k * s + u];
      su += t;
      sy += v;
      suu += t * t;
      suy += t * v;
    }
    const double m = static_cast<double>(s);
    const double b = (m * suy - su * sy) / (m * suu - su * su);
    const double a = (sy - b * su) / m;
    for (std::size_t u = 0; u < s; ++u) {
      const double t = static_cast<double>(u + 1);
      const double r = y[k * s + u] - (a + b * t);
      total += r * r;
    }
  }
  return std::sqrt(total / static_cast<double>(segments * s));
}

/// Least-squares slope of y on x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// fGn by Cholesky factorization of the exact Toeplitz covariance. O(n^3).
inline std::vector<double> cholesky_fgn(double hurst, std::size_t n, std::uint64_t seed) {
  auto gamma = [hurst](double k) {
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(std::fabs(k + 1), h2) - 2 * std::pow(std::fabs(k), h2) + std::pow(std::fabs(k - 1), h2));
  };
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = gamma(static_cast<double>(i) - static_cast<double>(j));
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = i == j ? std::sqrt(s) : s / l[j * n + j];
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> z(n), out(n, 0.0);
  for (auto& v : z) v = normal(rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= i; ++k) out[i] += l[i * n + k] * z[k];
  return out;
}

inline double lag_autocorrelation(const std::vector<double>& x, std::size_t lag) {
  double mean = 0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + lag < x.size()) num += (x[i] - mean) * (x[i + lag] - mean);
  }
  return num / den;
}

/// Samples from density proportional to x^-alpha e^(-lambda x) on [xmin, inf)
/// by tabulating the CDF with the trapezoid rule on a fine linear grid and
/// inverting it by bisection plus linear interpolation.
class TabulatedTruncatedSampler {
 public:
  TabulatedTruncatedSampler(double alpha, double lambda, double xmin) {
    const double xmax = xmin + 60.0 / lambda;
    const std::size_t steps = 400000;
    const double h = (xmax - xmin) / static_cast<double>(steps);
    xs_.resize(steps + 1);
    cdf_.resize(steps + 1);
    auto f = [&](double x) { return std::pow(x, -alpha) * std::exp(-lambda * x); };
    double acc = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
      xs_[i] = xmin + h * static_cast<double>(i);
      if (i > 0) acc += 0.5 * h * (f(xs_[i - 1]) + f(xs_[i]));
      cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }

  template <class Rng>
  double operator()(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p = unit(rng);
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
    const std::size_t hi = std::max<std::size_t>(1, static_cast<std::size_t>(it - cdf_.begin()));
    const std::size_t lo = hi - 1;
    const double t = (p - cdf_[lo]) / (cdf_[hi] - cdf_[lo]);
    return xs_[lo] + t * (xs_[hi] - xs_[lo]);
  }

 private:
  std::vector<double> xs_, cdf_;
};

/// Continuous Pareto on [xmin, inf) with density exponent alpha.
inline std::vector<double> pareto_sample(double alpha, double xmin, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = xmin * std::pow(1.0 - unit(rng), -1.0 / (alpha - 1.0));
  return out;
}

}  // namespace oracle

#endif  // VISGRAPH_TESTS_ORACLES_HPP
