#include <zlib.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "visgraph/visgraph.hpp"

namespace vg = visgraph;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeriesArgs {
  std::string input;
  std::string column;
  bool no_header = false;
};

void add_series_options(CLI::App* cmd, SeriesArgs& args) {
  cmd->add_option("--input", args.input, "CSV file with one series per column")->required();
  cmd->add_option("--column", args.column, "Header name, or 0-based index");
  cmd->add_flag("--no-header", args.no_header, "First row is data");
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

vg::ColumnSelector resolve_selector(const std::string& input, const std::string& column, bool has_header) {
  if (!has_header) {
    if (column.empty()) return std::size_t{0};
    if (!all_digits(column)) throw UsageError("--column must be an index when --no-header is given");
    return static_cast<std::size_t>(std::stoull(column));
  }
  if (column.empty()) {
    const auto numeric = vg::numeric_columns(input);
    if (numeric.empty()) throw vg::IngestError("no numeric column in '" + input + "'");
    if (std::find(numeric.begin(), numeric.end(), "value") != numeric.end()) return std::string("value");
    if (numeric.size() == 1) return numeric.front();
    std::string names;
    for (const auto& n : numeric) names += (names.empty() ? "" : ", ") + n;
    throw UsageError("several numeric columns (" + names + "); choose one with --column");
  }
  if (all_digits(column)) {
    const auto table = vg::csv::read_table(input, true);
    if (std::find(table.header.begin(), table.header.end(), column) == table.header.end())
      return static_cast<std::size_t>(std::stoull(column));
  }
  return column;
}

vg::TimeSeries load_series(const SeriesArgs& args) {
  const bool has_header = !args.no_header;
  return vg::load_csv(args.input, resolve_selector(args.input, args.column, has_header), has_header);
}

/// Parses "lo:hi:count" into log-spaced unique integer lengths.
std::vector<std::size_t> parse_lengths(const std::string& spec) {
  std::size_t lo = 0, hi = 0, count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || !in.eof())
    throw UsageError("--lengths expects lo:hi:count, got '" + spec + "'");
  if (lo < 10 || hi < lo || count < 1) throw UsageError("--lengths needs 10 <= lo <= hi and count >= 1");
  return vg::log_spaced_scales(lo, hi, count);
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    std::cout.flush();
    if (!std::cout) throw vg::OutputError("failed writing standard output");
    return;
  }
  vg::write_file_atomic(path, body);
}

void write_gzip(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  gzFile f = gzopen(tmp.c_str(), "wb");
  if (!f) throw vg::OutputError("cannot open '" + tmp + "' for writing");
  const bool ok = body.empty() || gzwrite(f, body.data(), static_cast<unsigned>(body.size())) > 0;
  if (gzclose(f) != Z_OK || !ok) throw vg::OutputError("failed writing '" + tmp + "'");
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw vg::OutputError("cannot rename '" + tmp + "'");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void check_replicas(std::size_t replicas) {
  if (replicas != 0 && replicas < 100) throw UsageError("--replicas must be 0 (skip) or at least 100");
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string input, config_path, out, lengths, algo = "dc", support = "discrete";
  std::vector<std::string> columns;
  bool all_columns = false, no_header = false, both_ends = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas, realizations;
  std::optional<double> bins_per_decade, k_min;
};

int run_analyze(const AnalyzeArgs& args) {
  vg::RunSpec spec;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw vg::IngestError("cannot open config file '" + args.config_path + "'");
    vg::Json doc;
    try {
      doc = vg::Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw vg::IngestError("cannot parse config '" + args.config_path + "': " + e.what());
    }
    spec = vg::run_spec_from_json(doc);
  }
  auto& c = spec.analysis;
  if (!args.input.empty()) spec.input = args.input;
  if (spec.input.empty()) throw UsageError("analyze needs --input or --config");
  if (args.no_header) spec.has_header = false;
  if (args.all_columns) spec.all_columns = true;
  if (!args.columns.empty()) {
    spec.columns.clear();
    for (const auto& col : args.columns) spec.columns.push_back(resolve_selector(spec.input, col, spec.has_header));
  }
  if (spec.all_columns && !spec.columns.empty()) throw UsageError("--column and --all-columns are exclusive");
  if (spec.all_columns && !spec.has_header) throw UsageError("--all-columns needs a header row");
  if (!spec.all_columns && spec.columns.empty())
    spec.columns.push_back(resolve_selector(spec.input, "", spec.has_header));
  if (args.config_path.empty() || args.algo != "dc") c.algorithm = vg::parse_vg_algorithm(args.algo);
  if (args.both_ends) c.dfa.direction = vg::DfaDirection::both_ends;
  if (args.config_path.empty() || args.support != "discrete")
    c.support = args.support == "continuous" ? vg::Support::continuous : vg::Support::discrete;
  if (args.seed) c.seed = *args.seed;
  if (args.replicas) c.replicas = *args.replicas;
  if (args.realizations) c.realizations = *args.realizations;
  if (args.bins_per_decade) c.bins_per_decade = *args.bins_per_decade;
  if (args.k_min) c.k_min = *args.k_min;
  if (!args.lengths.empty()) c.lengths = parse_lengths(args.lengths);
  check_replicas(c.replicas);
  if (c.realizations < 1) throw UsageError("--realizations must be at least 1");

  std::vector<vg::TimeSeries> series;
  if (spec.all_columns) {
    for (const auto& name : vg::numeric_columns(spec.input)) series.push_back(vg::load_csv(spec.input, name, true));
    if (series.empty()) throw vg::IngestError("no numeric column in '" + spec.input + "'");
  } else {
    for (const auto& col : spec.columns) series.push_back(vg::load_csv(spec.input, col, spec.has_header));
  }

  std::vector<vg::SeriesAnalysis> results(series.size());
  vg::parallel_for(series.size(), [&](std::size_t i) { results[i] = vg::analyze_series(series[i], i, c); });

  vg::write_report(args.out, spec, results);
  int status = 0;
  for (const auto& r : results) {
    if (!r.incomplete()) continue;
    std::cerr << "visgraph: series '" << r.label << "' has undefined stages (see report.json)\n";
    status = 2;
  }
  return status;
}

// ---------------------------------------------------------------------------

struct DfaArgs {
  SeriesArgs series;
  std::string out;
  std::size_t min_scale = 10, max_scale = 0, scales = 50;
  bool both_ends = false;
};

int run_dfa(const DfaArgs& args) {
  const auto s = load_series(args.series);
  vg::DfaConfig config{args.min_scale, args.max_scale, args.scales,
                       args.both_ends ? vg::DfaDirection::both_ends : vg::DfaDirection::forward_only};
  vg::DfaResult r;
  try {
    r = vg::estimate_hurst(s, config);
  } catch (const std::invalid_argument& e) {
    throw vg::AnalysisError(e.what());
  }
  vg::SeriesAnalysis a;
  a.label = s.label();
  a.dfa.value = r;
  const auto csv = vg::figure_tables(a).front().second;
  vg::AnalysisConfig ac;
  ac.dfa = config;
  const auto summary = vg::series_json(a, ac)["hurst"];
  if (args.out.empty()) {
    std::cout << csv;
    std::cerr << summary.dump() << "\n";
  } else {
    std::filesystem::create_directories(args.out);
    vg::write_file_atomic(std::filesystem::path(args.out) / "dfa.csv", csv);
    vg::write_file_atomic(std::filesystem::path(args.out) / "dfa.json", summary.dump(2) + "\n");
    std::cout << summary.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  SeriesArgs series;
  std::string degrees_from, family = "both", out, support = "discrete", algo = "dc";
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  std::optional<double> k_min;
};

int run_fit(const FitArgs& args) {
  check_replicas(args.replicas);
  std::vector<std::size_t> degrees;
  std::string source;
  if (!args.degrees_from.empty()) {
    std::ifstream in(args.degrees_from);
    if (!in) throw vg::IngestError("cannot open edge list '" + args.degrees_from + "'");
    degrees = vg::read_edgelist(in).degrees();
    source = args.degrees_from;
  } else if (!args.series.input.empty()) {
    degrees = vg::build_vg(load_series(args.series), vg::parse_vg_algorithm(args.algo)).degrees();
    source = args.series.input;
  } else {
    throw UsageError("fit needs --degrees-from or --input");
  }
  const auto sample = vg::degree_sample(degrees);
  vg::TailFitOptions options;
  options.support = args.support == "continuous" ? vg::Support::continuous : vg::Support::discrete;
  options.k_min = args.k_min;

  std::vector<std::pair<vg::TailFamily, vg::Stage>> families;
  if (args.family == "power_law" || args.family == "both")
    families.emplace_back(vg::TailFamily::power_law, vg::Stage::bootstrap_power_law);
  if (args.family == "truncated" || args.family == "both")
    families.emplace_back(vg::TailFamily::truncated_power_law, vg::Stage::bootstrap_truncated);

  vg::Json fits = vg::Json::array();
  for (const auto& [family, stage] : families) {
    vg::TailFitResult r;
    try {
      r.fit = vg::fit_tail(family, sample, options);
    } catch (const std::invalid_argument& e) {
      throw vg::AnalysisError(e.what());
    }
    r.bootstrap_seed = vg::stage_seed(args.seed, 0, stage);
    if (args.replicas > 0) {
      r.bootstrap.value = vg::bootstrap_pvalue_detail(sample, r.fit, args.replicas, r.bootstrap_seed, options);
      r.fit.p_value = r.bootstrap.value->p_value;
    }
    fits.push_back(vg::tail_json(r));
  }
  const vg::Json doc{{"schema", vg::kReportSchema},
                     {"tool", {{"name", "visgraph"}, {"version", vg::kToolVersion}}},
                     {"source", source},
                     {"seed", args.seed},
                     {"replicas", args.replicas},
                     {"fits", fits}};
  write_text(args.out, doc.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct SmallWorldArgs {
  SeriesArgs series;
  std::string lengths, out;
  std::size_t small_limit = 500;
};

int run_smallworld(const SmallWorldArgs& args) {
  const auto s = load_series(args.series);
  const auto lengths = args.lengths.empty() ? vg::default_window_lengths(s.size()) : parse_lengths(args.lengths);
  vg::SeriesAnalysis a;
  a.label = s.label();
  try {
    a.small_world.value = vg::small_world_scan(s, lengths, args.small_limit);
  } catch (const std::invalid_argument& e) {
    throw vg::AnalysisError(e.what());
  }
  std::string csv;
  for (const auto& [name, body] : vg::figure_tables(a))
    if (name == "small_world.csv") csv = body;
  const auto summary = vg::series_json(a, {})["small_world"];
  if (args.out.empty()) {
    std::cout << csv;
    std::cerr << summary.dump() << "\n";
  } else {
    std::filesystem::create_directories(args.out);
    vg::write_file_atomic(std::filesystem::path(args.out) / "small_world.csv", csv);
    vg::write_file_atomic(std::filesystem::path(args.out) / "small_world.json", summary.dump(2) + "\n");
    std::cout << summary.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct GraphArgs {
  SeriesArgs series;
  std::string algo = "dc", edgelist;
};

int run_graph(const GraphArgs& args) {
  const auto g = vg::build_vg(load_series(args.series), vg::parse_vg_algorithm(args.algo));
  if (!args.edgelist.empty()) {
    std::ostringstream body;
    vg::export_edgelist(g, body);
    if (ends_with(args.edgelist, ".gz"))
      write_gzip(args.edgelist, body.str());
    else
      vg::write_file_atomic(args.edgelist, body.str());
  }
  std::cout << "nodes " << g.node_count() << "\nedges " << g.edge_count() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string kind = "fgn", out;
  double hurst = 0.5;
  std::size_t length = 1000;
  std::uint64_t seed = 1;
};

int run_synth(const SynthArgs& args) {
  vg::SyntheticSpec spec;
  if (args.kind == "fgn")
    spec.kind = vg::SyntheticKind::fgn;
  else if (args.kind == "white_noise")
    spec.kind = vg::SyntheticKind::white_noise;
  else if (args.kind == "ramp")
    spec.kind = vg::SyntheticKind::linear_ramp;
  else
    spec.kind = vg::SyntheticKind::constant;
  if (!(args.hurst > 0.0 && args.hurst < 1.0)) throw UsageError("--hurst must lie in (0, 1)");
  if (args.length < 2) throw UsageError("--length must be at least 2");
  spec.hurst = args.hurst;
  spec.length = args.length;
  spec.seed = args.seed;
  std::ostringstream body;
  vg::write_csv(vg::generate(spec), body);
  write_text(args.out, body.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visibility-graph analysis of time series"};
  app.set_version_flag("--version", vg::kToolVersion);
  app.require_subcommand(1);

  const std::vector<std::string> algos{"oracle", "sweep", "dc"};
  const std::vector<std::string> supports{"discrete", "continuous"};

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Full pipeline: report.json plus figure CSVs");
  a->add_option("--input", analyze.input, "CSV file");
  a->add_option("--column", analyze.columns, "Column name or 0-based index; repeatable");
  a->add_flag("--all-columns", analyze.all_columns, "Analyze every numeric column");
  a->add_option("--out", analyze.out, "Output directory")->required();
  a->add_option("--config", analyze.config_path, "Replay the config block of a report");
  a->add_option("--seed", analyze.seed);
  a->add_option("--replicas", analyze.replicas, "Bootstrap replicas per tail fit; 0 skips");
  a->add_option("--realizations", analyze.realizations, "G(N,M) realizations");
  a->add_option("--lengths", analyze.lengths, "Small-world window lengths lo:hi:count");
  a->add_option("--bins-per-decade", analyze.bins_per_decade);
  a->add_option("--kmin", analyze.k_min, "Fix k_min instead of scanning");
  a->add_option("--support", analyze.support)->check(CLI::IsMember(supports));
  a->add_flag("--both-ends", analyze.both_ends, "DFA tiles from both ends");
  a->add_option("--algo", analyze.algo)->check(CLI::IsMember(algos));
  a->add_flag("--no-header", analyze.no_header);

  DfaArgs dfa;
  auto* d = app.add_subcommand("dfa", "Hurst exponent by DFA");
  add_series_options(d, dfa.series);
  d->add_option("--out", dfa.out, "Directory for dfa.csv and dfa.json");
  d->add_option("--min-scale", dfa.min_scale);
  d->add_option("--max-scale", dfa.max_scale, "0 means length / 4");
  d->add_option("--scales", dfa.scales);
  d->add_flag("--both-ends", dfa.both_ends);

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Degree tail fits with bootstrap p-values");
  f->add_option("--degrees-from", fit.degrees_from, "Edge list file");
  f->add_option("--input", fit.series.input, "CSV series; its visibility graph supplies degrees");
  f->add_option("--column", fit.series.column);
  f->add_flag("--no-header", fit.series.no_header);
  f->add_option("--algo", fit.algo)->check(CLI::IsMember(algos));
  f->add_option("--family", fit.family)->check(CLI::IsMember({"power_law", "truncated", "both"}));
  f->add_option("--replicas", fit.replicas, "0 skips the bootstrap");
  f->add_option("--seed", fit.seed);
  f->add_option("--kmin", fit.k_min);
  f->add_option("--support", fit.support)->check(CLI::IsMember(supports));
  f->add_option("--out", fit.out, "JSON output file; standard output when omitted");

  SmallWorldArgs sw;
  auto* s = app.add_subcommand("smallworld", "Mean path length against window length");
  add_series_options(s, sw.series);
  s->add_option("--lengths", sw.lengths, "lo:hi:count");
  s->add_option("--small-limit", sw.small_limit);
  s->add_option("--out", sw.out, "Directory for small_world.csv and small_world.json");

  GraphArgs graph;
  auto* g = app.add_subcommand("graph", "Build the visibility graph");
  add_series_options(g, graph.series);
  g->add_option("--algo", graph.algo)->check(CLI::IsMember(algos));
  g->add_option("--emit-edgelist", graph.edgelist, "Edge list path; gzip when it ends in .gz");

  SynthArgs synth;
  auto* y = app.add_subcommand("synth", "Synthetic series as CSV");
  y->add_option("--kind", synth.kind)->check(CLI::IsMember({"fgn", "white_noise", "ramp", "constant"}));
  y->add_option("--hurst", synth.hurst)->check(CLI::Range(0.0, 1.0));
  y->add_option("--length", synth.length);
  y->add_option("--seed", synth.seed);
  y->add_option("--out", synth.out, "CSV output file; standard output when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (a->parsed()) return run_analyze(analyze);
    if (d->parsed()) return run_dfa(dfa);
    if (f->parsed()) return run_fit(fit);
    if (s->parsed()) return run_smallworld(sw);
    if (g->parsed()) return run_graph(graph);
    if (y->parsed()) return run_synth(synth);
  } catch (const UsageError& e) {
    std::cerr << "visgraph: " << e.what() << "\n";
    return 1;
  } catch (const vg::IngestError& e) {
    std::cerr << "visgraph: " << e.what() << "\n";
    return 1;
  } catch (const vg::AnalysisError& e) {
    std::cerr << "visgraph: analysis failed: " << e.what() << "\n";
    return 2;
  } catch (const vg::OutputError& e) {
    std::cerr << "visgraph: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "visgraph: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "visgraph: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
