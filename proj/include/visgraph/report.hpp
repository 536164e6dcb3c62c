#ifndef VISGRAPH_REPORT_HPP
#define VISGRAPH_REPORT_HPP

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "visgraph/dfa.hpp"
#include "visgraph/distfit.hpp"
#include "visgraph/error.hpp"
#include "visgraph/metrics.hpp"
#include "visgraph/regression.hpp"
#include "visgraph/rng.hpp"
#include "visgraph/series.hpp"
#include "visgraph/visibility.hpp"

namespace visgraph {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

using Json = nlohmann::ordered_json;

struct AnalysisConfig {
  VgAlgorithm algorithm = VgAlgorithm::dc;
  DfaConfig dfa;
  double bins_per_decade = 10.0;
  Support support = Support::discrete;
  std::optional<double> k_min;        // scanned when empty
  std::size_t replicas = 1000;        // 0 skips the bootstrap
  std::size_t realizations = 20;
  std::uint64_t seed = 1;
  std::vector<std::size_t> lengths;   // empty: 50 log-spaced lengths on [10, T]
  std::size_t small_limit = 500;
  std::size_t loglog_max_degree = 100;  // 0 keeps every degree in the ln c ~ ln k fit
};

/// Input selection plus analysis parameters; the `config` block of a report.
struct RunSpec {
  std::string input;
  std::vector<ColumnSelector> columns;
  bool all_columns = false;
  bool has_header = true;
  AnalysisConfig analysis;
};

enum class Stage : std::uint64_t { bootstrap_power_law = 0, bootstrap_truncated = 1, null_model = 2 };

inline std::uint64_t stage_seed(std::uint64_t seed, std::size_t series_index, Stage stage) {
  return derive_seed(derive_seed(seed, series_index), static_cast<std::uint64_t>(stage));
}

/// A stage result, or the reason the stage could not run on this series.
template <class T>
struct Outcome {
  std::optional<T> value;
  std::string error;

  bool ok() const { return value.has_value(); }
};

template <class T, class Fn>
Outcome<T> attempt(Fn&& fn) {
  Outcome<T> out;
  try {
    out.value = fn();
  } catch (const AnalysisError& e) {
    out.error = e.what();
  } catch (const std::invalid_argument& e) {
    out.error = e.what();
  }
  return out;
}

struct TailFitResult {
  DegreeTailFit fit;
  Outcome<BootstrapOutcome> bootstrap;  // empty without error when replicas == 0
  std::uint64_t bootstrap_seed = 0;
  std::optional<AlphaHurstRelation> relation;
};

struct ClusteringFits {
  LinearFit loglog;   // ln c_i on ln k_i
  LinearFit inverse;  // 1 / c_i on k_i
  std::size_t excluded_loglog = 0;
  std::size_t excluded_inverse = 0;
};

struct SeriesAnalysis {
  std::size_t index = 0;
  std::string label;
  std::size_t length = 0;
  GlobalStats global;
  Outcome<DfaResult> dfa;
  std::vector<double> degrees;  // positive degrees
  Outcome<LogBinnedPdf> pdf;
  std::array<Outcome<TailFitResult>, 2> tails;  // power law, truncated
  ClusteringReport clustering;
  Outcome<ClusteringFits> clustering_fits;
  Outcome<SmallWorldScan> small_world;
  Outcome<NullModelComparison> null_model;
  MixingReport mixing;

  /// True when any stage recorded an error.
  bool incomplete() const {
    bool bad = !dfa.ok() || !pdf.ok() || !clustering_fits.ok() || !small_world.ok() || !null_model.ok();
    for (const auto& t : tails) bad = bad || !t.ok() || !t.value->bootstrap.error.empty();
    return bad;
  }
};

inline SeriesAnalysis analyze_series(const TimeSeries& series, std::size_t index, const AnalysisConfig& config) {
  SeriesAnalysis a;
  a.index = index;
  a.label = series.label();
  a.length = series.size();

  a.dfa = attempt<DfaResult>([&] { return estimate_hurst(series, config.dfa); });

  const auto g = build_vg(series, config.algorithm);
  a.global = global_stats(g);
  a.degrees = degree_sample(g.degrees());
  a.pdf = attempt<LogBinnedPdf>([&] { return log_binned_pdf(a.degrees, config.bins_per_decade); });

  TailFitOptions options;
  options.support = config.support;
  options.k_min = config.k_min;
  constexpr std::array<TailFamily, 2> families{TailFamily::power_law, TailFamily::truncated_power_law};
  constexpr std::array<Stage, 2> stages{Stage::bootstrap_power_law, Stage::bootstrap_truncated};
  for (std::size_t f = 0; f < families.size(); ++f) {
    a.tails[f] = attempt<TailFitResult>([&] {
      TailFitResult r;
      r.fit = fit_tail(families[f], a.degrees, options);
      r.bootstrap_seed = stage_seed(config.seed, index, stages[f]);
      if (config.replicas > 0)
        r.bootstrap = attempt<BootstrapOutcome>([&] {
          return bootstrap_pvalue_detail(a.degrees, r.fit, config.replicas, r.bootstrap_seed, options);
        });
      if (r.bootstrap.ok()) r.fit.p_value = r.bootstrap.value->p_value;
      if (a.dfa.ok() && a.dfa.value->hurst > 0.0 && a.dfa.value->hurst < 1.0)
        r.relation = alpha_hurst_relation(r.fit.alpha, a.dfa.value->hurst);
      return r;
    });
  }

  a.clustering = clustering(g);
  a.clustering_fits = attempt<ClusteringFits>([&] {
    const auto rel = clustering_degree_relation(a.clustering, {config.loglog_max_degree});
    ClusteringFits fits;
    fits.loglog = ols(rel.ln_k, rel.ln_c);
    fits.inverse = ols(rel.k, rel.inverse_c);
    fits.excluded_loglog = rel.excluded_loglog;
    fits.excluded_inverse = rel.excluded_inverse;
    return fits;
  });

  a.small_world = attempt<SmallWorldScan>([&] {
    if (series.size() < 10) throw AnalysisError("small-world scan: series shorter than 10");
    const auto lengths = config.lengths.empty() ? default_window_lengths(series.size()) : config.lengths;
    return small_world_scan(series, lengths, config.small_limit);
  });

  a.null_model = attempt<NullModelComparison>([&] {
    return null_model_compare(g, config.realizations, stage_seed(config.seed, index, Stage::null_model));
  });

  a.mixing = knn_curve(g);
  return a;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class T>
Json optional_number(const std::optional<T>& v) {
  return v ? number(static_cast<double>(*v)) : Json(nullptr);
}

inline Json fit_json(const LinearFit& f) {
  return Json{{"intercept", number(f.intercept)},     {"slope", number(f.slope)},
              {"pearson_r", number(f.pearson_r)},     {"r_squared", number(f.r_squared)},
              {"adjusted_r_squared", number(f.adjusted_r_squared)},
              {"slope_se", number(f.slope_se)},       {"slope_p_value", number(f.slope_p_value)},
              {"n", f.n}};
}

template <class T, class Fn>
Json outcome_json(const Outcome<T>& o, Fn&& render) {
  if (o.ok()) return render(*o.value);
  return Json{{"undefined", true}, {"reason", o.error}};
}

inline const char* to_string(DfaDirection d) {
  return d == DfaDirection::forward_only ? "forward_only" : "both_ends";
}

inline DfaDirection parse_direction(const std::string& s) {
  if (s == "forward_only") return DfaDirection::forward_only;
  if (s == "both_ends") return DfaDirection::both_ends;
  throw std::invalid_argument("unknown DFA direction '" + s + "'");
}

inline Support parse_support(const std::string& s) {
  if (s == "discrete") return Support::discrete;
  if (s == "continuous") return Support::continuous;
  throw std::invalid_argument("unknown support '" + s + "'");
}

}  // namespace detail

inline Json config_json(const RunSpec& spec) {
  const auto& c = spec.analysis;
  Json columns = Json::array();
  for (const auto& col : spec.columns) {
    if (const auto* name = std::get_if<std::string>(&col))
      columns.push_back(*name);
    else
      columns.push_back(std::get<std::size_t>(col));
  }
  return Json{
      {"input", spec.input},
      {"columns", columns},
      {"all_columns", spec.all_columns},
      {"has_header", spec.has_header},
      {"algorithm", to_string(c.algorithm)},
      {"dfa",
       {{"min_scale", c.dfa.min_scale},
        {"max_scale", c.dfa.max_scale},
        {"scale_count", c.dfa.scale_count},
        {"direction", detail::to_string(c.dfa.direction)}}},
      {"bins_per_decade", c.bins_per_decade},
      {"support", to_string(c.support)},
      {"k_min", detail::optional_number(c.k_min)},
      {"replicas", c.replicas},
      {"realizations", c.realizations},
      {"seed", c.seed},
      {"lengths", c.lengths},
      {"small_limit", c.small_limit},
      {"loglog_max_degree", c.loglog_max_degree},
  };
}

/// Inverse of config_json; accepts either a config block or a whole report.
inline RunSpec run_spec_from_json(const Json& doc) {
  const Json& j = doc.contains("config") ? doc.at("config") : doc;
  RunSpec spec;
  try {
    spec.input = j.at("input").get<std::string>();
    for (const auto& col : j.at("columns")) {
      if (col.is_string())
        spec.columns.emplace_back(col.get<std::string>());
      else
        spec.columns.emplace_back(col.get<std::size_t>());
    }
    spec.all_columns = j.at("all_columns").get<bool>();
    spec.has_header = j.at("has_header").get<bool>();
    auto& c = spec.analysis;
    c.algorithm = parse_vg_algorithm(j.at("algorithm").get<std::string>());
    const auto& d = j.at("dfa");
    c.dfa.min_scale = d.at("min_scale").get<std::size_t>();
    c.dfa.max_scale = d.at("max_scale").get<std::size_t>();
    c.dfa.scale_count = d.at("scale_count").get<std::size_t>();
    c.dfa.direction = detail::parse_direction(d.at("direction").get<std::string>());
    c.bins_per_decade = j.at("bins_per_decade").get<double>();
    c.support = detail::parse_support(j.at("support").get<std::string>());
    if (!j.at("k_min").is_null()) c.k_min = j.at("k_min").get<double>();
    c.replicas = j.at("replicas").get<std::size_t>();
    c.realizations = j.at("realizations").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.lengths = j.at("lengths").get<std::vector<std::size_t>>();
    c.small_limit = j.at("small_limit").get<std::size_t>();
    c.loglog_max_degree = j.at("loglog_max_degree").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("invalid config: ") + e.what());
  }
  return spec;
}

inline Json tail_json(const TailFitResult& t) {
  const auto& f = t.fit;
  Json j{{"family", to_string(f.family)},
         {"support", to_string(f.support)},
         {"alpha", detail::number(f.alpha)},
         {"lambda", detail::optional_number(f.lambda)},
         {"k_min", detail::number(f.k_min)},
         {"k_min_scanned", f.k_min_scanned},
         {"ks_distance", detail::number(f.ks_distance)},
         {"tail_size", f.tail_size},
         {"sample_size", f.sample_size},
         {"log_likelihood", detail::number(f.log_likelihood)},
         {"reduces_to_power_law", f.reduces_to_power_law},
         {"p_value", detail::optional_number(f.p_value)}};
  Json boot{{"seed", t.bootstrap_seed}};
  if (t.bootstrap.ok()) {
    boot["replicas"] = t.bootstrap.value->replicas;
    boot["failures"] = t.bootstrap.value->failures;
  } else if (!t.bootstrap.error.empty()) {
    boot["undefined"] = true;
    boot["reason"] = t.bootstrap.error;
  } else {
    boot["replicas"] = 0;
    boot["skipped"] = true;
  }
  j["bootstrap"] = boot;
  if (t.relation)
    j["alpha_hurst"] = Json{{"lower_3_minus_2h", t.relation->lower},
                            {"middle_4_minus_2h", t.relation->middle},
                            {"upper_5_minus_2h", t.relation->upper},
                            {"inside_band", t.relation->inside_band}};
  else
    j["alpha_hurst"] = nullptr;
  return j;
}

inline Json series_json(const SeriesAnalysis& a, const AnalysisConfig& config) {
  using detail::fit_json;
  using detail::number;
  using detail::outcome_json;
  Json j;
  j["index"] = a.index;
  j["label"] = a.label;
  j["length"] = a.length;
  j["hurst"] = outcome_json(a.dfa, [&](const DfaResult& r) {
    return Json{{"hurst", number(r.hurst)},
                {"slope_se", number(r.fit.slope_se)},
                {"r", number(r.fit.pearson_r)},
                {"intercept", number(r.fit.intercept)},
                {"scales_used", r.points.size()},
                {"direction", detail::to_string(config.dfa.direction)},
                {"persistence", to_string(r.persistence())}};
  });
  j["global"] = Json{{"nodes", a.global.node_count},
                     {"edges", a.global.edge_count},
                     {"density", number(a.global.density)},
                     {"average_degree", number(a.global.average_degree)},
                     {"max_degree", a.global.max_degree}};
  j["degree_pdf"] = outcome_json(a.pdf, [&](const LogBinnedPdf& p) {
    return Json{{"bins_per_decade", number(config.bins_per_decade)},
                {"occupied_bins", p.bins.size()},
                {"observations", p.total}};
  });
  Json tails = Json::array();
  for (const auto& t : a.tails) tails.push_back(outcome_json(t, [](const TailFitResult& r) { return tail_json(r); }));
  j["tail_fits"] = tails;
  Json cl{{"average", number(a.clustering.average)}, {"density", number(a.global.density)}};
  cl["loglog_max_degree"] = config.loglog_max_degree;
  if (a.clustering_fits.ok()) {
    const auto& f = *a.clustering_fits.value;
    cl["ln_c_on_ln_k"] = fit_json(f.loglog);
    cl["ln_c_on_ln_k"]["excluded_nodes"] = f.excluded_loglog;
    cl["inverse_c_on_k"] = fit_json(f.inverse);
    cl["inverse_c_on_k"]["excluded_nodes"] = f.excluded_inverse;
  } else {
    cl["ln_c_on_ln_k"] = Json{{"undefined", true}, {"reason", a.clustering_fits.error}};
    cl["inverse_c_on_k"] = Json{{"undefined", true}, {"reason", a.clustering_fits.error}};
  }
  j["clustering"] = cl;
  j["small_world"] = outcome_json(a.small_world, [&](const SmallWorldScan& s) {
    Json points = Json::array();
    for (const auto& p : s.points)
      points.push_back(Json{{"N", p.length}, {"L", number(p.mean_path_length)}, {"windows", p.windows}});
    return Json{{"log_base", 10},
                {"small_limit", s.small_limit},
                {"fit_all", fit_json(s.fit_all)},
                {"fit_small", s.fit_small ? fit_json(*s.fit_small) : Json(nullptr)},
                {"points", points}};
  });
  j["null_model"] = outcome_json(a.null_model, [&](const NullModelComparison& n) {
    return Json{{"path_length_actual", number(n.path_length_actual)},
                {"path_length_random", number(n.path_length_random)},
                {"clustering_actual", number(n.clustering_actual)},
                {"clustering_random", number(n.clustering_random)},
                {"random_connected_fraction", number(n.random_connected_fraction)},
                {"realizations", n.realizations},
                {"seed", n.seed}};
  });
  j["mixing"] = Json{{"assortativity", detail::optional_number(a.mixing.assortativity)},
                     {"isolated_nodes", a.mixing.isolated_nodes},
                     {"knn_curve_points", a.mixing.curve.size()}};
  return j;
}

/// ln C on ln <k> across series, as in the cross-index comparison of average clustering.
inline Json cross_series_json(const std::vector<SeriesAnalysis>& all) {
  std::vector<double> x, y;
  for (const auto& a : all) {
    if (a.clustering.average > 0.0 && a.global.average_degree > 0.0) {
      x.push_back(std::log(a.global.average_degree));
      y.push_back(std::log(a.clustering.average));
    }
  }
  Json j;
  try {
    j["ln_c_on_ln_average_degree"] = detail::fit_json(ols(x, y));
  } catch (const std::invalid_argument& e) {
    j["ln_c_on_ln_average_degree"] = Json{{"undefined", true}, {"reason", e.what()}};
  }
  return j;
}

inline Json build_report(const RunSpec& spec, const std::vector<SeriesAnalysis>& all) {
  Json seeds = Json::array();
  for (const auto& a : all)
    seeds.push_back(Json{{"index", a.index},
                         {"bootstrap_power_law", stage_seed(spec.analysis.seed, a.index, Stage::bootstrap_power_law)},
                         {"bootstrap_truncated", stage_seed(spec.analysis.seed, a.index, Stage::bootstrap_truncated)},
                         {"null_model", stage_seed(spec.analysis.seed, a.index, Stage::null_model)}});
  Json series = Json::array();
  for (const auto& a : all) series.push_back(series_json(a, spec.analysis));
  return Json{
      {"schema", kReportSchema},
      {"tool", {{"name", "visgraph"}, {"version", kToolVersion}}},
      {"conventions",
       {{"p_value", "two-sided t-test of zero slope, n - 2 degrees of freedom"},
        {"tail_p_value", "semi-parametric bootstrap of the KS distance"},
        {"log_clustering", "natural"},
        {"log_small_world", "base 10"},
        {"tail_fit_order", {"power_law", "truncated_power_law"}}}},
      {"config", config_json(spec)},
      {"seeds", {{"base", spec.analysis.seed}, {"per_series", seeds}}},
      {"series", series},
      {"cross_series", cross_series_json(all)},
  };
}

// ---------------------------------------------------------------------------
// Files

/// Writes via a sibling temporary file and a rename so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw OutputError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

namespace detail {

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt(std::size_t v) { return std::to_string(v); }

}  // namespace detail

/// Six figure tables for one series, each with a header row.
inline std::vector<std::pair<std::string, std::string>> figure_tables(const SeriesAnalysis& a) {
  using detail::fmt;
  std::vector<std::pair<std::string, std::string>> files;

  std::string dfa = "s,F\n";
  if (a.dfa.ok())
    for (const auto& p : a.dfa.value->points) dfa += fmt(p.scale) + "," + fmt(p.fluctuation) + "\n";
  files.emplace_back("dfa.csv", std::move(dfa));

  std::string pdf = "curve,k,f\n";
  if (a.pdf.ok())
    for (const auto& b : a.pdf.value->bins) pdf += "empirical," + fmt(b.center) + "," + fmt(b.density) + "\n";
  double k_max = 0.0;
  for (const double k : a.degrees) k_max = std::max(k_max, k);
  for (const auto& t : a.tails) {
    if (!t.ok()) continue;
    const auto& fit = t.value->fit;
    const double lo = model_lower_bound(fit.k_min, fit.support);
    if (!(k_max > lo)) continue;
    // Scaled by the tail share so curves overlay the full-sample density.
    const double share = static_cast<double>(fit.tail_size) / static_cast<double>(fit.sample_size);
    constexpr int kPoints = 200;
    for (int i = 0; i < kPoints; ++i) {
      const double x = lo * std::pow(k_max / lo, static_cast<double>(i) / (kPoints - 1));
      pdf += std::string(to_string(fit.family)) + "," + fmt(x) + "," + fmt(share * model_density(fit, x)) + "\n";
    }
  }
  files.emplace_back("degree_pdf.csv", std::move(pdf));

  std::string ck = "node,k,c\n", inv = "node,k,inv_c\n";
  for (std::size_t i = 0; i < a.clustering.degree.size(); ++i) {
    const auto k = a.clustering.degree[i];
    const double c = a.clustering.coefficient[i];
    ck += fmt(i) + "," + fmt(k) + "," + fmt(c) + "\n";
    if (k >= 2 && c > 0.0) inv += fmt(i) + "," + fmt(k) + "," + fmt(1.0 / c) + "\n";
  }
  files.emplace_back("clustering_k.csv", std::move(ck));
  files.emplace_back("inverse_clustering_k.csv", std::move(inv));

  std::string sw = "N,L,windows\n";
  if (a.small_world.ok())
    for (const auto& p : a.small_world.value->points)
      sw += fmt(p.length) + "," + fmt(p.mean_path_length) + "," + fmt(p.windows) + "\n";
  files.emplace_back("small_world.csv", std::move(sw));

  std::string knn = "k,knn_mean,count\n";
  for (const auto& p : a.mixing.curve) knn += fmt(p.k) + "," + fmt(p.mean) + "," + fmt(p.count) + "\n";
  files.emplace_back("knn.csv", std::move(knn));
  return files;
}

/// Directory for one series' figures: the output directory itself for a
/// single series, else a numbered subdirectory named after the label.
inline std::filesystem::path figure_directory(const std::filesystem::path& out, const SeriesAnalysis& a,
                                              std::size_t series_count) {
  if (series_count == 1) return out;
  std::string name = std::to_string(a.index) + "_";
  for (const char c : a.label) name += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out / name;
}

inline void write_report(const std::filesystem::path& out, const RunSpec& spec,
                         const std::vector<SeriesAnalysis>& all) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw OutputError("cannot create output directory '" + out.string() + "'");
  for (const auto& a : all) {
    const auto dir = figure_directory(out, a, all.size());
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create directory '" + dir.string() + "'");
    for (const auto& [name, body] : figure_tables(a)) write_file_atomic(dir / name, body);
  }
  write_file_atomic(out / "report.json", build_report(spec, all).dump(2) + "\n");
}

}  // namespace visgraph

#endif  // VISGRAPH_REPORT_HPP
