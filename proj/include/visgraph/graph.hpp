#ifndef VISGRAPH_GRAPH_HPP
#define VISGRAPH_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "visgraph/error.hpp"

namespace visgraph {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph in compressed sparse row form.
/// Neighbor lists are sorted ascending.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. Endpoint order is irrelevant; self-loops,
  /// duplicates and out-of-range endpoints are rejected.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges) {
    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (const auto& e : edges) {
      if (e.u >= node_count || e.v >= node_count)
        throw std::invalid_argument("Graph: edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("Graph: self-loop at node " + std::to_string(e.u));
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(g.offsets_[node_count]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : edges) {
      g.targets_[cursor[e.u]++] = e.v;
      g.targets_[cursor[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
      auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
      auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last)
        throw std::invalid_argument("Graph: duplicate edge at node " + std::to_string(i));
    }
    return g;
  }

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(std::size_t node) const noexcept {
    return {targets_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
  }
  std::size_t degree(std::size_t node) const noexcept { return offsets_[node + 1] - offsets_[node]; }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> k(node_count());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = degree(i);
    return k;
  }

  bool has_edge(std::size_t a, std::size_t b) const {
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), static_cast<NodeId>(b));
  }

  /// Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < node_count(); ++i)
      for (const NodeId j : neighbors(i))
        if (j > i) out.push_back({static_cast<NodeId>(i), j});
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

/// Graphs built from time series; node i is time index i.
using VisibilityGraph = Graph;

// Small reference graphs with closed-form metrics.

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({NodeId(i), NodeId(i + 1)});
  return Graph::from_edges(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: n must be at least 3");
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({NodeId(i), NodeId((i + 1) % n)});
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.push_back({NodeId(i), NodeId(j)});
  return Graph::from_edges(n, e);
}

/// Star on n nodes: node 0 is the hub.
inline Graph star_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.push_back({0, NodeId(i)});
  return Graph::from_edges(n, e);
}

/// Writes one "i j" line per edge (i < j, lexicographic). Returns the line count.
inline std::size_t export_edgelist(const Graph& graph, std::ostream& sink) {
  std::size_t lines = 0;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    for (const NodeId j : graph.neighbors(i)) {
      if (j <= i) continue;
      sink << i << ' ' << j << '\n';
      ++lines;
    }
  }
  sink.flush();
  if (!sink) throw OutputError("edge list: stream write failed");
  return lines;
}

/// Reads the edge-list format written by export_edgelist. Node count is
/// one past the largest endpoint seen.
inline Graph read_edgelist(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t max_node = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream fields(line);
    std::uint64_t a = 0, b = 0;
    if (!(fields >> a >> b) || a > UINT32_MAX || b > UINT32_MAX)
      throw IngestError("edge list: malformed line " + std::to_string(line_no));
    edges.push_back({NodeId(a), NodeId(b)});
    max_node = std::max<std::size_t>(max_node, std::max(a, b));
  }
  if (edges.empty()) throw IngestError("edge list: no edges");
  try {
    return Graph::from_edges(max_node + 1, edges);
  } catch (const std::invalid_argument& e) {
    throw IngestError(std::string("edge list: ") + e.what());
  }
}

}  // namespace visgraph

#endif  // VISGRAPH_GRAPH_HPP
