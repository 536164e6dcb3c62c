#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("visgraph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && VISGRAPH_THREADS=2 '" VISGRAPH_CLI_PATH "' " + args +
                            " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_F(Cli, SynthWritesRequestedRows) {
  auto r = run("synth --kind fgn --hurst 0.8 --length 8192 --seed 1 --out fgn.csv");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto body = slurp(path("fgn.csv"));
  EXPECT_EQ(lines(body), 8193u);
  EXPECT_EQ(body.substr(0, 12), "index,value\n");

  r = run("synth --kind ramp --length 100");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out), 101u);
  EXPECT_NE(r.out.find("\n99,99\n"), std::string::npos);

  EXPECT_EQ(run("synth --kind fgn --hurst 1.5 --length 100").status, 1);
  EXPECT_EQ(run("synth --kind fgn --hurst 0 --length 100").status, 1);
  EXPECT_EQ(run("synth --kind ramp --length 1").status, 1);
  EXPECT_EQ(run("synth --kind pink").status, 1);

  // Same seed, same bytes.
  run("synth --kind fgn --hurst 0.8 --length 8192 --seed 1 --out again.csv");
  EXPECT_EQ(slurp(path("again.csv")), body);
}

TEST_F(Cli, MissingInputNamesThePath) {
  const auto r = run("analyze --input no_such_file.csv --column Rice --out outdir");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("no_such_file.csv"), std::string::npos) << r.err;
  EXPECT_EQ(run("graph --input absent.csv").status, 1);
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("frobnicate").status, 1);
  EXPECT_EQ(run("graph --input x.csv --algo fast").status, 1);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(Cli, BadRowIsIngestError) {
  std::ofstream(path("bad.csv")) << "Rice\n1\n2\nabc\n4\n";
  const auto r = run("graph --input bad.csv --column Rice");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("row 4"), std::string::npos) << r.err;
}

TEST_F(Cli, GraphEmitsEdgeListAndCounts) {
  std::ofstream(path("x.csv")) << "t,v\n0,3\n1,1\n2,2\n3,0\n4,4\n";
  auto r = run("graph --input x.csv --column v --algo dc --emit-edgelist e.txt");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "nodes 5\nedges 7\n");
  EXPECT_EQ(slurp(path("e.txt")), "0 1\n0 2\n0 4\n1 2\n2 3\n2 4\n3 4\n");

  for (const char* algo : {"oracle", "sweep"}) {
    r = run(std::string("graph --input x.csv --column v --algo ") + algo);
    EXPECT_EQ(r.out, "nodes 5\nedges 7\n");
  }

  r = run("graph --input x.csv --column v --emit-edgelist e.txt.gz");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto gz = slurp(path("e.txt.gz"));
  ASSERT_GE(gz.size(), 2u);
  EXPECT_EQ(static_cast<unsigned char>(gz[0]), 0x1f);
  EXPECT_EQ(static_cast<unsigned char>(gz[1]), 0x8b);

  EXPECT_EQ(run("graph --input x.csv --column v --emit-edgelist no/such/dir/e.txt").status, 3);
}

TEST_F(Cli, FitReportsBothFamilies) {
  ASSERT_EQ(run("synth --kind fgn --hurst 0.7 --length 3000 --seed 2 --out x.csv").status, 0);
  ASSERT_EQ(run("graph --input x.csv --emit-edgelist e.txt").status, 0);
  auto r = run("fit --degrees-from e.txt --family both --replicas 100 --seed 7");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["fits"].size(), 2u);
  EXPECT_EQ(doc["fits"][0]["family"], "power_law");
  EXPECT_EQ(doc["fits"][1]["family"], "truncated_power_law");
  for (const auto& f : doc["fits"]) {
    EXPECT_GE(f["p_value"].get<double>(), 0.0);
    EXPECT_LE(f["p_value"].get<double>(), 1.0);
    EXPECT_EQ(f["bootstrap"]["replicas"], 100);
  }

  // Degrees from the series directly agree with the edge list route.
  const auto direct = nlohmann::json::parse(run("fit --input x.csv --family power_law --replicas 0").out);
  EXPECT_EQ(direct["fits"][0]["alpha"], doc["fits"][0]["alpha"]);
  EXPECT_EQ(run("fit --degrees-from e.txt --replicas 50").status, 1);
  EXPECT_EQ(run("fit --family both").status, 1);
}

TEST_F(Cli, DfaAndSmallWorldStages) {
  ASSERT_EQ(run("synth --kind fgn --hurst 0.7 --length 4096 --seed 3 --out x.csv").status, 0);
  auto r = run("dfa --input x.csv --out d");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto summary = nlohmann::json::parse(slurp(path("d/dfa.json")));
  for (const char* key : {"hurst", "slope_se", "r", "scales_used"}) EXPECT_TRUE(summary.contains(key)) << key;
  EXPECT_EQ(slurp(path("d/dfa.csv")).substr(0, 4), "s,F\n");
  EXPECT_NEAR(summary["hurst"].get<double>(), 0.7, 0.1);

  r = run("smallworld --input x.csv --lengths 10:4096:12 --out sw");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto sw = nlohmann::json::parse(slurp(path("sw/small_world.json")));
  EXPECT_TRUE(sw["fit_all"].is_object());
  EXPECT_TRUE(sw["fit_small"].is_object());
  EXPECT_EQ(lines(slurp(path("sw/small_world.csv"))), 13u);
  EXPECT_EQ(run("smallworld --input x.csv --lengths 5:100:10").status, 1);

  {
    std::ofstream flat(path("flat.csv"));
    flat << "v\n";
    for (int i = 0; i < 300; ++i) flat << "1.5\n";
  }
  EXPECT_EQ(run("dfa --input flat.csv").status, 2);
}

TEST_F(Cli, AnalyzeWritesReportAndSixFigures) {
  ASSERT_EQ(run("synth --kind fgn --hurst 0.75 --length 1500 --seed 4 --out x.csv").status, 0);
  const std::string args = "analyze --input x.csv --column value --replicas 100 --realizations 2 --seed 9 --out ";
  auto r = run(args + "a");
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* f : {"report.json", "dfa.csv", "degree_pdf.csv", "clustering_k.csv", "inverse_clustering_k.csv",
                        "small_world.csv", "knn.csv"})
    EXPECT_TRUE(fs::exists(path("a") / f)) << f;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(path("a"))) files += e.is_regular_file();
  EXPECT_EQ(files, 7u);

  const auto report = slurp(path("a/report.json"));
  const auto doc = nlohmann::json::parse(report);
  EXPECT_EQ(doc["schema"], 1);
  EXPECT_EQ(doc["config"]["seed"], 9);
  EXPECT_EQ(doc["series"][0]["global"]["nodes"], 1500);

  ASSERT_EQ(run(args + "b").status, 0);
  EXPECT_EQ(slurp(path("b/report.json")), report);

  // Replaying the echoed config reproduces the report.
  ASSERT_EQ(run("analyze --config a/report.json --out c").status, 0);
  EXPECT_EQ(slurp(path("c/report.json")), report);
}

TEST_F(Cli, AnalyzeAllColumnsAndPartialFailure) {
  {
    std::ofstream f(path("m.csv"));
    f << "date,Up,Flat\n";
    for (int i = 0; i < 400; ++i) f << "d" << i << "," << ((i * 7919) % 101) * 0.5 << ",2\n";
  }
  const auto r = run("analyze --input m.csv --all-columns --replicas 0 --realizations 1 --out m");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("Flat"), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(path("m/report.json")));
  ASSERT_EQ(doc["series"].size(), 2u);
  EXPECT_TRUE(doc["series"][1]["hurst"]["undefined"].get<bool>());
  EXPECT_TRUE(fs::exists(path("m/0_Up/knn.csv")));
  EXPECT_TRUE(fs::exists(path("m/1_Flat/dfa.csv")));
  EXPECT_EQ(run("analyze --input m.csv --all-columns --column Up --out n").status, 1);
}
