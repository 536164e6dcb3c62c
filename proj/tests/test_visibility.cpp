#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "visgraph/synth.hpp"
#include "visgraph/visibility.hpp"

using namespace visgraph;

namespace {

const oracle::EdgeSet kExample{{0, 1}, {0, 2}, {0, 4}, {1, 2}, {2, 3}, {2, 4}, {3, 4}};

oracle::EdgeSet path_edges(std::size_t n) {
  oracle::EdgeSet s;
  for (std::size_t i = 0; i + 1 < n; ++i) s.emplace(i, i + 1);
  return s;
}

constexpr VgAlgorithm kAll[] = {VgAlgorithm::oracle, VgAlgorithm::sweep, VgAlgorithm::dc};

}  // namespace

TEST(Visible, Examples) {
  const TimeSeries s({3, 1, 2, 0, 4});
  EXPECT_FALSE(visible(s, 0, 3));
  EXPECT_FALSE(visible(s, 1, 4));  // collinear point blocks
  EXPECT_TRUE(visible(s, 0, 4));
  for (std::size_t i = 0; i + 1 < s.size(); ++i) EXPECT_TRUE(visible(s, i, i + 1));
  EXPECT_THROW(visible(s, 2, 2), std::invalid_argument);
  EXPECT_THROW(visible(s, 3, 5), std::invalid_argument);
}

TEST(BuildVg, SmallExamplesAllAlgorithms) {
  for (const auto algo : kAll) {
    SCOPED_TRACE(to_string(algo));
    EXPECT_EQ(oracle::edge_set(build_vg(TimeSeries({3, 1, 2, 0, 4}), algo)), kExample);
    EXPECT_EQ(oracle::edge_set(build_vg(TimeSeries({0, 1, 2, 3}), algo)), path_edges(4));
    EXPECT_EQ(oracle::edge_set(build_vg(TimeSeries({5, 0}), algo)), path_edges(2));
    EXPECT_EQ(oracle::edge_set(build_vg(TimeSeries(std::vector<double>(17, 2.5)), algo)), path_edges(17));
    const oracle::EdgeSet peak{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}};
    EXPECT_EQ(oracle::edge_set(build_vg(TimeSeries({0, 1, 5, 1, 0}), algo)), peak);
  }
}

TEST(BuildVg, MatchesIntegerOracle) {
  // Small integer alphabets produce many exact collinearities and ties.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<long long> len(2, 40), val(-3, 3);
    std::vector<long long> xi(static_cast<std::size_t>(len(rng)));
    for (auto& v : xi) v = val(rng);
    const std::vector<double> xd(xi.begin(), xi.end());
    const auto truth = oracle::integer_visibility(xi);
    for (const auto algo : kAll) EXPECT_EQ(oracle::edge_set(build_vg(TimeSeries(xd), algo)), truth) << to_string(algo);
  }
}

TEST(BuildVg, AlgorithmsAgreeOnGaussianAndFgn) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(60);
    for (auto& v : x) v = normal(rng);
    const TimeSeries s(x);
    const auto ref = build_vg_oracle(s);
    EXPECT_EQ(build_vg_sweep(s), ref);
    EXPECT_EQ(build_vg_dc(s), ref);
  }
  for (const double h : {0.3, 0.8}) {
    const auto s = generate({SyntheticKind::fgn, h, 300, 4});
    const auto ref = build_vg_oracle(s);
    EXPECT_EQ(build_vg_sweep(s), ref);
    EXPECT_EQ(build_vg_dc(s), ref);
  }
}

TEST(BuildVg, Invariances) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-50.0, 50.0), trend(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(100);
    for (auto& v : x) v = normal(rng);
    const auto base = build_vg_dc(TimeSeries(x));
    std::vector<double> affine(x.size()), tilted(x.size());
    const double a = scale(rng), b = shift(rng), c = trend(rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      affine[i] = a * x[i] + b;
      tilted[i] = x[i] + c * static_cast<double>(i);
    }
    EXPECT_EQ(build_vg_dc(TimeSeries(affine)), base);
    EXPECT_EQ(build_vg_dc(TimeSeries(tilted)), base);
  }
}

TEST(BuildVg, StructuralProperties) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(80);
    for (auto& v : x) v = normal(rng);
    const auto g = build_vg_dc(TimeSeries(x));
    EXPECT_EQ(g.node_count(), x.size());
    // Neighbors in time are always visible, so the graph is connected and has T-1 edges at least.
    for (std::size_t i = 0; i + 1 < x.size(); ++i) EXPECT_TRUE(g.has_edge(i, i + 1));
    // Reversal in time mirrors the graph.
    std::vector<double> rev(x.rbegin(), x.rend());
    const auto gr = build_vg_dc(TimeSeries(rev));
    oracle::EdgeSet mirrored;
    for (const auto& e : gr.edges()) mirrored.emplace(x.size() - 1 - e.v, x.size() - 1 - e.u);
    EXPECT_EQ(mirrored, oracle::edge_set(g));
  }
}

TEST(BuildVg, StrictlyConvexSeriesIsComplete) {
  std::vector<double> x(30);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i * i);
  for (const auto algo : kAll) EXPECT_EQ(build_vg(TimeSeries(x), algo), complete_graph(x.size()));
}

TEST(BuildVg, ParseAlgorithm) {
  EXPECT_EQ(parse_vg_algorithm("dc"), VgAlgorithm::dc);
  EXPECT_EQ(parse_vg_algorithm("sweep"), VgAlgorithm::sweep);
  EXPECT_EQ(parse_vg_algorithm("oracle"), VgAlgorithm::oracle);
  EXPECT_THROW(parse_vg_algorithm("fast"), std::invalid_argument);
}

TEST(Edgelist, ExportAndReadBack) {
  std::ostringstream out;
  EXPECT_EQ(export_edgelist(path_graph(3), out), 2u);
  EXPECT_EQ(out.str(), "0 1\n1 2\n");

  std::ostringstream ex;
  const auto g = build_vg_dc(TimeSeries({3, 1, 2, 0, 4}));
  EXPECT_EQ(export_edgelist(g, ex), 7u);
  std::istringstream in(ex.str());
  EXPECT_EQ(read_edgelist(in), g);
}

TEST(Edgelist, Errors) {
  std::istringstream bad("0 1\nx y\n");
  EXPECT_THROW(read_edgelist(bad), IngestError);
  std::istringstream loop("0 0\n");
  EXPECT_THROW(read_edgelist(loop), IngestError);
  std::istringstream dup("0 1\n1 0\n");
  EXPECT_THROW(read_edgelist(dup), IngestError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(read_edgelist(empty), IngestError);

  std::ostringstream sink;
  sink.setstate(std::ios::badbit);
  EXPECT_THROW(export_edgelist(path_graph(3), sink), OutputError);
}

TEST(Graph, Construction) {
  const std::vector<Edge> e{{0, 1}, {1, 2}};
  const auto g = Graph::from_edges(4, e);
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree(3), 0u);
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));
  const std::vector<Edge> out_of_range{{0, 4}};
  EXPECT_THROW(Graph::from_edges(4, out_of_range), std::invalid_argument);
}
