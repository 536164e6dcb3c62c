#ifndef VISGRAPH_DISTFIT_HPP
#define VISGRAPH_DISTFIT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "visgraph/error.hpp"
#include "visgraph/parallel.hpp"
#include "visgraph/rng.hpp"

namespace visgraph {

// ---------------------------------------------------------------------------
// Logarithmic binning

struct LogBin {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;  // geometric mean of the edges
  double density = 0.0; // count / (total * width)
  std::size_t count = 0;
};

/// Occupied geometric bins; `edges` lists every bin edge, occupied or not.
struct LogBinnedPdf {
  std::vector<double> edges;
  std::vector<LogBin> bins;
  std::size_t total = 0;
};

inline LogBinnedPdf log_binned_pdf(std::span<const double> values, double bins_per_decade = 10.0) {
  if (values.size() < 10) throw std::invalid_argument("log_binned_pdf: need at least 10 observations");
  if (!(bins_per_decade > 0.0)) throw std::invalid_argument("log_binned_pdf: bins_per_decade must be > 0");
  const auto nonpositive = std::count_if(values.begin(), values.end(), [](double v) { return !(v >= 1.0); });
  if (nonpositive > 0)
    throw std::invalid_argument("log_binned_pdf: " + std::to_string(nonpositive) +
                                " values below 1 (filter zero degrees first)");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  auto index_of = [&](double v) {
    return static_cast<std::size_t>(std::floor(std::log10(v / lo) * bins_per_decade));
  };
  const std::size_t bin_count = index_of(*hi_it) + 1;
  LogBinnedPdf pdf;
  pdf.total = values.size();
  pdf.edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i)
    pdf.edges[i] = lo * std::pow(10.0, static_cast<double>(i) / bins_per_decade);
  std::vector<std::size_t> counts(bin_count, 0);
  for (const double v : values) {
    std::size_t i = std::min(index_of(v), bin_count - 1);
    // Guard the pow/log10 round trip at bin edges.
    while (i > 0 && v < pdf.edges[i]) --i;
    while (i + 1 < bin_count && v >= pdf.edges[i + 1]) ++i;
    ++counts[i];
  }
  const auto total = static_cast<double>(pdf.total);
  for (std::size_t i = 0; i < bin_count; ++i) {
    if (counts[i] == 0) continue;
    const double width = pdf.edges[i + 1] - pdf.edges[i];
    pdf.bins.push_back({pdf.edges[i], pdf.edges[i + 1], std::sqrt(pdf.edges[i] * pdf.edges[i + 1]),
                        static_cast<double>(counts[i]) / (total * width), counts[i]});
  }
  return pdf;
}

// ---------------------------------------------------------------------------
// Tail models

enum class TailFamily { power_law, truncated_power_law };

/// discrete: integer data (degrees) treated with a half-unit continuity
/// correction; the model lives on [k_min - 1/2, inf) and an observation k
/// stands for the interval [k - 1/2, k + 1/2). continuous: model on [k_min, inf).
enum class Support { discrete, continuous };

inline const char* to_string(TailFamily f) {
  return f == TailFamily::power_law ? "power_law" : "truncated_power_law";
}
inline const char* to_string(Support s) { return s == Support::discrete ? "discrete" : "continuous"; }

struct TailFitOptions {
  Support support = Support::discrete;
  std::optional<double> k_min;       // scanned when empty
  std::size_t max_candidates = 200;  // k_min values tried by the scan
  std::size_t min_tail = 10;
};

struct DegreeTailFit {
  TailFamily family = TailFamily::power_law;
  Support support = Support::discrete;
  double alpha = 0.0;
  std::optional<double> lambda;  // truncated family only
  double k_min = 0.0;
  bool k_min_scanned = false;
  double ks_distance = 0.0;
  std::optional<double> p_value;
  std::size_t tail_size = 0;
  std::size_t sample_size = 0;
  double log_likelihood = 0.0;
  bool reduces_to_power_law = false;  // truncated fit with lambda below kLambdaFloor
};

/// Fitted lambda below this is reported as a pure power law.
inline constexpr double kLambdaFloor = 1e-4;

inline double model_lower_bound(double k_min, Support support) {
  return support == Support::discrete ? k_min - 0.5 : k_min;
}

inline double cdf_abscissa(double x, Support support) {
  return support == Support::discrete ? x + 0.5 : x;
}

/// Values >= k_min, sorted ascending.
inline std::vector<double> tail_of(std::span<const double> values, double k_min) {
  std::vector<double> tail;
  for (const double v : values)
    if (v >= k_min) tail.push_back(v);
  std::sort(tail.begin(), tail.end());
  return tail;
}

namespace detail {

struct TailSums {
  double n = 0.0;
  double sum_log = 0.0;
  double sum = 0.0;
};

inline TailSums tail_sums(std::span<const double> tail) {
  TailSums s;
  s.n = static_cast<double>(tail.size());
  for (const double x : tail) {
    s.sum_log += std::log(x);
    s.sum += x;
  }
  return s;
}

inline void require_tail(std::span<const double> tail, std::size_t min_tail) {
  if (tail.size() < min_tail)
    throw AnalysisError("tail fit: only " + std::to_string(tail.size()) + " observations >= k_min (need " +
                        std::to_string(min_tail) + ")");
  if (tail.front() == tail.back()) throw AnalysisError("tail fit: all tail values are equal");
}

}  // namespace detail

// ---- pure power law ------------------------------------------------------

inline double powerlaw_cdf(double x, double alpha, double bound) {
  if (x <= bound) return 0.0;
  return 1.0 - std::pow(x / bound, 1.0 - alpha);
}

inline double powerlaw_log_likelihood(std::span<const double> tail, double alpha, double bound) {
  double s = 0.0;
  for (const double x : tail) s += std::log(x / bound);
  const auto n = static_cast<double>(tail.size());
  return n * std::log((alpha - 1.0) / bound) - alpha * s;
}

/// alpha = 1 + n / sum ln(x / bound).
inline double powerlaw_alpha_mle(std::span<const double> tail, double bound) {
  double s = 0.0;
  for (const double x : tail) s += std::log(x / bound);
  if (!(s > 0.0)) throw AnalysisError("power law fit: tail has no spread above the lower bound");
  return 1.0 + static_cast<double>(tail.size()) / s;
}

// ---- exponentially truncated power law -----------------------------------

namespace detail {

// Integrand after k = bound * e^u, with the factor bound^(1-alpha) e^(-lambda bound) removed.
struct ScaledIntegrand {
  double alpha, lambda_bound;
  double operator()(double u) const {
    return std::exp((1.0 - alpha) * u - lambda_bound * std::expm1(u));
  }
};

// Beyond this u the scaled integrand is below e^-60 of its scale.
inline double integration_cutoff(double alpha, double lambda_bound) {
  double u = std::log1p(60.0 / lambda_bound);
  for (int i = 0; i < 3; ++i) u = std::log1p((60.0 + std::max(0.0, 1.0 - alpha) * u) / lambda_bound);
  return u;
}

inline double integrate_segment(const ScaledIntegrand& g, double a, double b) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 15, 1e-10, &error);
}

// Fixed 15-point Gauss-Legendre on panels no wider than 0.05 in u. Used
// where many short adjacent pieces are summed and adaptive error control
// would stall on round-off.
inline double integrate_panels(const ScaledIntegrand& g, double a, double b) {
  if (!(b > a)) return 0.0;
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / 0.05));
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    sum += boost::math::quadrature::gauss<double, 15>::integrate(g, lo, p + 1 == panels ? b : lo + h);
  }
  return sum;
}

// Integral of the scaled integrand over [0, inf).
inline double scaled_normalizer(double alpha, double lambda, double bound) {
  const ScaledIntegrand g{alpha, lambda * bound};
  if (lambda == 0.0) return alpha > 1.0 ? 1.0 / (alpha - 1.0) : std::numeric_limits<double>::infinity();
  const double cutoff = integration_cutoff(alpha, g.lambda_bound);
  // Split at the integrand's peak when it lies inside the range.
  double peak = 0.0;
  if (alpha < 1.0) peak = std::log((1.0 - alpha) / g.lambda_bound);
  if (peak > 0.0 && peak < cutoff) return integrate_segment(g, 0.0, peak) + integrate_segment(g, peak, cutoff);
  return integrate_segment(g, 0.0, cutoff);
}

}  // namespace detail

/// ln Z with Z = integral_{bound}^{inf} k^-alpha e^(-lambda k) dk, by adaptive
/// Gauss-Kronrod quadrature in u = ln(k / bound). +inf when Z diverges.
inline double truncated_log_normalizer(double alpha, double lambda, double bound) {
  const double scaled = detail::scaled_normalizer(alpha, lambda, bound);
  if (!std::isfinite(scaled)) return std::numeric_limits<double>::infinity();
  return (1.0 - alpha) * std::log(bound) - lambda * bound + std::log(scaled);
}

inline double truncated_normalizer(double alpha, double lambda, double bound) {
  return std::exp(truncated_log_normalizer(alpha, lambda, bound));
}

inline double truncated_log_likelihood(const detail::TailSums& sums, double alpha, double lambda,
                                       double bound) {
  if (!(alpha > 0.0) || lambda < 0.0) return -std::numeric_limits<double>::infinity();
  const double log_z = truncated_log_normalizer(alpha, lambda, bound);
  if (!std::isfinite(log_z)) return -std::numeric_limits<double>::infinity();
  return -sums.n * log_z - alpha * sums.sum_log - lambda * sums.sum;
}

inline double truncated_log_likelihood(std::span<const double> tail, double alpha, double lambda,
                                       double bound) {
  return truncated_log_likelihood(detail::tail_sums(tail), alpha, lambda, bound);
}

/// Model CDF at ascending abscissae (all >= bound).
inline std::vector<double> truncated_cdf(std::span<const double> xs, double alpha, double lambda,
                                         double bound) {
  std::vector<double> out(xs.size());
  if (lambda == 0.0) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = powerlaw_cdf(xs[i], alpha, bound);
    return out;
  }
  const detail::ScaledIntegrand g{alpha, lambda * bound};
  const double total = detail::integrate_panels(g, 0.0, detail::integration_cutoff(alpha, g.lambda_bound));
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = std::log(std::max(xs[i], bound) / bound);
    acc += detail::integrate_panels(g, prev, u);
    prev = std::max(prev, u);
    out[i] = std::min(1.0, acc / total);
  }
  return out;
}

// ---- Nelder-Mead on (alpha, lambda) ----------------------------------------

namespace detail {

struct SimplexResult {
  std::array<double, 2> point{};
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Minimizes f over (alpha, lambda >= 0); lambda is projected onto the
// constraint. Converged once the simplex diameter drops below `tolerance`.
template <class F>
SimplexResult nelder_mead(F&& f, std::array<double, 2> start, std::array<double, 2> step,
                          double tolerance = 1e-6, int max_iterations = 4000) {
  using P = std::array<double, 2>;
  auto project = [](P p) {
    p[1] = std::max(0.0, p[1]);
    return p;
  };
  auto eval = [&](const P& p) {
    const double v = f(p[0], p[1]);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  std::array<P, 3> s{project(start), project({start[0] + step[0], start[1]}),
                     project({start[0], start[1] + step[1]})};
  std::array<double, 3> fv{eval(s[0]), eval(s[1]), eval(s[2])};
  auto diameter = [&] {
    double d = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) d = std::max(d, std::hypot(s[a][0] - s[b][0], s[a][1] - s[b][1]));
    return d;
  };
  SimplexResult result;
  for (int it = 0; it < max_iterations; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    if (diameter() < tolerance) {
      result.converged = true;
      break;
    }
    const P centroid{(s[best][0] + s[mid][0]) / 2.0, (s[best][1] + s[mid][1]) / 2.0};
    auto along = [&](double t) {
      return project({centroid[0] + t * (s[worst][0] - centroid[0]), centroid[1] + t * (s[worst][1] - centroid[1])});
    };
    const P reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < fv[best]) {
      const P expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        s[worst] = expanded;
        fv[worst] = fe;
      } else {
        s[worst] = reflected;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[mid]) {
      s[worst] = reflected;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const P contracted = along(outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : fv[worst])) {
      s[worst] = contracted;
      fv[worst] = fc;
      continue;
    }
    for (const int k : {mid, worst}) {
      s[k] = project({s[best][0] + 0.5 * (s[k][0] - s[best][0]), s[best][1] + 0.5 * (s[k][1] - s[best][1])});
      fv[k] = eval(s[k]);
    }
  }
  const int best = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  result.point = s[best];
  result.value = fv[best];
  return result;
}

}  // namespace detail

// ---- fitting at a fixed k_min ------------------------------------------------

namespace detail {

// sup over distinct tail values of |S(x) - F(x)|, S the right-continuous ECDF.
inline double ks_from_model_cdf(std::span<const double> sorted_tail, std::span<const double> unique,
                                std::span<const double> model_cdf) {
  const auto n = static_cast<double>(sorted_tail.size());
  double d = 0.0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    while (seen < sorted_tail.size() && sorted_tail[seen] <= unique[i]) ++seen;
    d = std::max(d, std::fabs(static_cast<double>(seen) / n - model_cdf[i]));
  }
  return std::min(d, 1.0);
}

inline std::vector<double> unique_values(std::span<const double> sorted) {
  std::vector<double> u(sorted.begin(), sorted.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

inline std::vector<double> model_cdf_at(std::span<const double> unique, const DegreeTailFit& fit) {
  const double bound = model_lower_bound(fit.k_min, fit.support);
  std::vector<double> xs(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) xs[i] = cdf_abscissa(unique[i], fit.support);
  if (fit.family == TailFamily::power_law) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = powerlaw_cdf(xs[i], fit.alpha, bound);
    return out;
  }
  return truncated_cdf(xs, fit.alpha, fit.lambda.value_or(0.0), bound);
}

inline double ks_for_fit(std::span<const double> sorted_tail, const DegreeTailFit& fit) {
  const auto unique = unique_values(sorted_tail);
  const auto cdf = model_cdf_at(unique, fit);
  return ks_from_model_cdf(sorted_tail, unique, cdf);
}

inline DegreeTailFit fit_powerlaw_at(std::span<const double> sorted_tail, double k_min, Support support,
                                     std::size_t sample_size, std::size_t min_tail) {
  require_tail(sorted_tail, min_tail);
  DegreeTailFit fit;
  fit.family = TailFamily::power_law;
  fit.support = support;
  fit.k_min = k_min;
  fit.tail_size = sorted_tail.size();
  fit.sample_size = sample_size;
  const double bound = model_lower_bound(k_min, support);
  fit.alpha = powerlaw_alpha_mle(sorted_tail, bound);
  fit.log_likelihood = powerlaw_log_likelihood(sorted_tail, fit.alpha, bound);
  fit.ks_distance = ks_for_fit(sorted_tail, fit);
  return fit;
}

inline DegreeTailFit fit_truncated_at(std::span<const double> sorted_tail, double k_min, Support support,
                                      std::size_t sample_size, std::size_t min_tail) {
  require_tail(sorted_tail, min_tail);
  const double bound = model_lower_bound(k_min, support);
  const auto sums = tail_sums(sorted_tail);
  const double mean = sums.sum / sums.n;
  auto objective = [&](double alpha, double lambda) {
    return -truncated_log_likelihood(sums, alpha, lambda, bound);
  };

  // The nested pure power law optimum is evaluated too, so the truncated
  // likelihood can never fall below it.
  const double alpha_pl = powerlaw_alpha_mle(sorted_tail, bound);
  const double ll_pl = powerlaw_log_likelihood(sorted_tail, alpha_pl, bound);

  const std::array<std::array<double, 2>, 3> starts{{{1.5, 1.0 / mean}, {2.5, 1.0 / mean}, {1.1, 1e-4}}};
  detail::SimplexResult best;
  bool any_converged = false;
  for (const auto& start : starts) {
    auto point = start;
    for (int restart = 0; restart < 3; ++restart) {
      const std::array<double, 2> step{0.25, std::max(0.5 * point[1], 1e-4)};
      const auto r = nelder_mead(objective, point, step);
      if (r.value < best.value) best = r;
      if (r.converged) {
        any_converged = true;
        break;
      }
      point = r.point;
    }
  }
  if (!any_converged) throw AnalysisError("truncated power law fit: optimizer did not converge");

  DegreeTailFit fit;
  fit.family = TailFamily::truncated_power_law;
  fit.support = support;
  fit.k_min = k_min;
  fit.tail_size = sorted_tail.size();
  fit.sample_size = sample_size;
  if (-best.value >= ll_pl) {
    fit.alpha = best.point[0];
    fit.lambda = best.point[1];
    fit.log_likelihood = -best.value;
  } else {
    fit.alpha = alpha_pl;
    fit.lambda = 0.0;
    fit.log_likelihood = ll_pl;
  }
  fit.reduces_to_power_law = *fit.lambda < kLambdaFloor;
  fit.ks_distance = ks_for_fit(sorted_tail, fit);
  return fit;
}

inline DegreeTailFit fit_family_at(TailFamily family, std::span<const double> sorted_tail, double k_min,
                                   Support support, std::size_t sample_size, std::size_t min_tail) {
  return family == TailFamily::power_law ? fit_powerlaw_at(sorted_tail, k_min, support, sample_size, min_tail)
                                         : fit_truncated_at(sorted_tail, k_min, support, sample_size, min_tail);
}

/// Distinct values usable as k_min (tail >= min_tail with at least two
/// distinct values), thinned evenly to at most max_candidates.
inline std::vector<double> kmin_candidates(std::span<const double> sorted, std::size_t min_tail,
                                           std::size_t max_candidates) {
  std::vector<double> all;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    const std::size_t tail = sorted.size() - i;
    if (tail < min_tail || sorted[i] == sorted.back()) break;
    all.push_back(sorted[i]);
  }
  if (all.size() <= max_candidates || max_candidates == 0) return all;
  std::vector<double> picked;
  for (std::size_t i = 0; i < max_candidates; ++i) {
    const std::size_t idx = max_candidates == 1 ? 0 : (i * (all.size() - 1) + (max_candidates - 1) / 2) / (max_candidates - 1);
    if (picked.empty() || all[idx] != picked.back()) picked.push_back(all[idx]);
  }
  return picked;
}

inline DegreeTailFit fit_family(TailFamily family, std::span<const double> values, const TailFitOptions& options) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (options.k_min) {
    const auto tail = tail_of(sorted, *options.k_min);
    return fit_family_at(family, tail, *options.k_min, options.support, values.size(), options.min_tail);
  }
  const auto candidates = kmin_candidates(sorted, options.min_tail, options.max_candidates);
  if (candidates.empty())
    throw AnalysisError("tail fit: no k_min leaves " + std::to_string(options.min_tail) + " distinct-valued observations");
  std::optional<DegreeTailFit> best;
  for (const double k_min : candidates) {
    const auto offset = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), k_min) - sorted.begin());
    const std::span<const double> tail(sorted.data() + offset, sorted.size() - offset);
    try {
      auto fit = fit_family_at(family, tail, k_min, options.support, values.size(), options.min_tail);
      if (!best || fit.ks_distance < best->ks_distance) best = std::move(fit);
    } catch (const AnalysisError&) {
      // Candidate unusable; the scan continues.
    }
  }
  if (!best) throw AnalysisError(std::string("tail fit: no k_min candidate could be fitted for ") + to_string(family));
  best->k_min_scanned = true;
  return *best;
}

}  // namespace detail

/// Pure power law f(k) ~ k^-alpha by maximum likelihood. With a scanned
/// k_min, the candidate minimizing the KS distance wins.
inline DegreeTailFit fit_powerlaw(std::span<const double> values, const TailFitOptions& options = {}) {
  return detail::fit_family(TailFamily::power_law, values, options);
}

/// f(k) ~ k^-alpha e^(-lambda k) by maximum likelihood (simplex search with
/// lambda >= 0, multi-start). k_min scanning uses this family's KS distance.
inline DegreeTailFit fit_truncated_powerlaw(std::span<const double> values, const TailFitOptions& options = {}) {
  return detail::fit_family(TailFamily::truncated_power_law, values, options);
}

inline DegreeTailFit fit_tail(TailFamily family, std::span<const double> values, const TailFitOptions& options = {}) {
  return detail::fit_family(family, values, options);
}

/// KS distance between the tail (values >= fit.k_min) and the fitted model.
inline double ks_distance(std::span<const double> tail, const DegreeTailFit& fit) {
  auto sorted = tail_of(tail, fit.k_min);
  if (sorted.empty()) throw std::invalid_argument("ks_distance: empty tail");
  return detail::ks_for_fit(sorted, fit);
}

/// KS distance against an arbitrary model CDF, evaluated at the distinct observations.
template <class Cdf>
double ks_distance(std::span<const double> sample, Cdf&& cdf) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto unique = detail::unique_values(sorted);
  std::vector<double> model(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) model[i] = cdf(unique[i]);
  return detail::ks_from_model_cdf(sorted, unique, model);
}

/// Density of the fitted tail model at x (x >= lower bound), normalized over the tail.
inline double model_density(const DegreeTailFit& fit, double x) {
  const double bound = model_lower_bound(fit.k_min, fit.support);
  if (x < bound) return 0.0;
  if (fit.family == TailFamily::power_law || fit.lambda.value_or(0.0) == 0.0)
    return (fit.alpha - 1.0) / bound * std::pow(x / bound, -fit.alpha);
  const double log_z = truncated_log_normalizer(fit.alpha, *fit.lambda, bound);
  return std::exp(-fit.alpha * std::log(x) - *fit.lambda * x - log_z);
}

// ---------------------------------------------------------------------------
// Sampling from fitted tails

/// Draws from the continuous tail model on [bound, inf). Pure power laws
/// invert the CDF in closed form; truncated ones invert a tabulated CDF on a
/// log grid.
class TailSampler {
 public:
  TailSampler(TailFamily family, double alpha, double lambda, double bound)
      : alpha_(alpha), lambda_(lambda), bound_(bound) {
    pure_ = family == TailFamily::power_law || lambda == 0.0;
    if (pure_) {
      if (!(alpha > 1.0)) throw std::invalid_argument("TailSampler: power law needs alpha > 1");
      return;
    }
    const detail::ScaledIntegrand g{alpha, lambda * bound};
    const double cutoff = detail::integration_cutoff(alpha, g.lambda_bound);
    constexpr std::size_t kGrid = 4096;
    grid_.resize(kGrid + 1);
    cdf_.resize(kGrid + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i <= kGrid; ++i) {
      grid_[i] = cutoff * static_cast<double>(i) / static_cast<double>(kGrid);
      if (i > 0) acc += detail::integrate_segment(g, grid_[i - 1], grid_[i]);
      cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }

  explicit TailSampler(const DegreeTailFit& fit)
      : TailSampler(fit.family, fit.alpha, fit.lambda.value_or(0.0), model_lower_bound(fit.k_min, fit.support)) {}

  template <class Rng>
  double operator()(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p = unit(rng);
    if (pure_) return bound_ * std::pow(1.0 - p, -1.0 / (alpha_ - 1.0));
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), p);
    const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    const double span = cdf_[hi] - cdf_[lo];
    const double t = span > 0.0 ? (p - cdf_[lo]) / span : 0.0;
    return bound_ * std::exp(grid_[lo] + t * (grid_[hi] - grid_[lo]));
  }

 private:
  double alpha_, lambda_, bound_;
  bool pure_ = true;
  std::vector<double> grid_, cdf_;
};

// ---------------------------------------------------------------------------
// Bootstrap goodness of fit

struct BootstrapOutcome {
  double p_value = 0.0;
  std::size_t replicas = 0;
  std::size_t failures = 0;
};

/// Semi-parametric bootstrap: each replica keeps the sample size, draws from
/// the fitted tail with probability n_tail / n and otherwise resamples the
/// observed values below k_min, then refits with the same k_min policy.
/// p is the share of successful replicas whose KS distance is at least the
/// observed one. Replica r uses seed derive_seed(seed, r).
inline BootstrapOutcome bootstrap_pvalue_detail(std::span<const double> values, const DegreeTailFit& fit,
                                                std::size_t replicas, std::uint64_t seed,
                                                const TailFitOptions& options = {}) {
  if (replicas < 100) throw std::invalid_argument("bootstrap_pvalue: need at least 100 replicas");
  std::vector<double> body;
  std::size_t tail_count = 0;
  for (const double v : values) {
    if (v >= fit.k_min)
      ++tail_count;
    else
      body.push_back(v);
  }
  const double tail_share = static_cast<double>(tail_count) / static_cast<double>(values.size());
  const TailSampler sampler(fit);
  TailFitOptions refit = options;
  refit.support = fit.support;
  refit.k_min = fit.k_min_scanned ? std::nullopt : std::optional<double>(fit.k_min);

  std::vector<signed char> outcome(replicas, -1);  // -1 failed, 0 below, 1 at or above
  parallel_for(replicas, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(seed, r));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, body.empty() ? 0 : body.size() - 1);
    std::vector<double> synthetic(values.size());
    for (auto& v : synthetic) {
      if (body.empty() || unit(rng) < tail_share) {
        v = sampler(rng);
        if (fit.support == Support::discrete) v = std::floor(v + 0.5);
      } else {
        v = body[pick(rng)];
      }
    }
    try {
      const auto refitted = fit_tail(fit.family, synthetic, refit);
      outcome[r] = refitted.ks_distance >= fit.ks_distance ? 1 : 0;
    } catch (const AnalysisError&) {
      outcome[r] = -1;
    }
  });
  BootstrapOutcome out;
  out.replicas = replicas;
  std::size_t exceed = 0;
  for (const auto o : outcome) {
    if (o < 0)
      ++out.failures;
    else
      exceed += static_cast<std::size_t>(o);
  }
  if (out.failures * 20 > replicas)
    throw AnalysisError("bootstrap: " + std::to_string(out.failures) + " of " + std::to_string(replicas) +
                        " replica refits failed");
  out.p_value = static_cast<double>(exceed) / static_cast<double>(replicas - out.failures);
  return out;
}

inline double bootstrap_pvalue(std::span<const double> values, const DegreeTailFit& fit, std::size_t replicas,
                               std::uint64_t seed, const TailFitOptions& options = {}) {
  return bootstrap_pvalue_detail(values, fit, replicas, seed, options).p_value;
}

// ---------------------------------------------------------------------------

/// Reference tail exponents 3 - 2H (fractional Brownian motion), 4 - 2H and
/// 5 - 2H (fractional Gaussian noise); `inside_band` when alpha is in [3-2H, 5-2H].
struct AlphaHurstRelation {
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
  bool inside_band = false;
};

inline AlphaHurstRelation alpha_hurst_relation(double alpha, double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("alpha_hurst_relation: hurst must lie in (0, 1)");
  AlphaHurstRelation r;
  r.lower = 3.0 - 2.0 * hurst;
  r.middle = 4.0 - 2.0 * hurst;
  r.upper = 5.0 - 2.0 * hurst;
  r.inside_band = alpha >= r.lower && alpha <= r.upper;
  return r;
}

/// Degrees as the real-valued sample the fitters take.
inline std::vector<double> degree_sample(std::span<const std::size_t> degrees) {
  std::vector<double> out;
  out.reserve(degrees.size());
  for (const auto k : degrees)
    if (k > 0) out.push_back(static_cast<double>(k));
  return out;
}

}  // namespace visgraph

#endif  // VISGRAPH_DISTFIT_HPP
