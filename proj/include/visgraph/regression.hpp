#ifndef VISGRAPH_REGRESSION_HPP
#define VISGRAPH_REGRESSION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace visgraph {

/// Simple least-squares line y = intercept + slope * x with its diagnostics.
/// slope_p_value is the two-sided t-test of slope == 0 on n - 2 degrees of freedom.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double pearson_r = 0.0;
  double r_squared = 0.0;
  double adjusted_r_squared = 0.0;
  double slope_se = 0.0;
  double slope_p_value = 1.0;
  std::size_t n = 0;
};

namespace detail {

struct Moments {
  double mean_x = 0.0, mean_y = 0.0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
};

inline Moments centered_moments(std::span<const double> x, std::span<const double> y) {
  Moments m;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

}  // namespace detail

/// Product-moment correlation; empty when either input is constant.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
  const auto m = detail::centered_moments(x, y);
  if (m.sxx == 0.0 || m.syy == 0.0) return std::nullopt;
  // sxx and syy enter symmetrically so pearson(x, y) == pearson(y, x) bit for bit.
  return m.sxy / std::sqrt(m.sxx * m.syy);
}

inline LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("ols: need at least 3 points");
  const auto m = detail::centered_moments(x, y);
  if (m.sxx == 0.0) throw std::invalid_argument("ols: x is constant");

  LinearFit fit;
  fit.n = x.size();
  const auto n = static_cast<double>(fit.n);
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;

  // Constant y: the flat line is exact but carries no correlation.
  if (m.syy == 0.0) {
    fit.pearson_r = 0.0;
    fit.r_squared = 0.0;
    fit.adjusted_r_squared = 1.0 - (n - 1.0) / (n - 2.0);
    fit.slope_se = 0.0;
    fit.slope_p_value = 1.0;
    return fit;
  }

  fit.pearson_r = m.sxy / std::sqrt(m.sxx * m.syy);
  fit.r_squared = fit.pearson_r * fit.pearson_r;
  fit.adjusted_r_squared = 1.0 - (1.0 - fit.r_squared) * (n - 1.0) / (n - 2.0);

  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += e * e;
  }
  const double dof = n - 2.0;
  fit.slope_se = std::sqrt(sse / dof / m.sxx);
  if (fit.slope_se == 0.0) {
    fit.slope_p_value = 0.0;
  } else {
    const double t = std::fabs(fit.slope / fit.slope_se);
    boost::math::students_t_distribution<double> dist(dof);
    fit.slope_p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
  }
  return fit;
}

}  // namespace visgraph

#endif  // VISGRAPH_REGRESSION_HPP
