#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "visgraph/regression.hpp"

using visgraph::ols;
using visgraph::pearson;

TEST(Ols, ExactLine) {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(2.0 * i + 1.0);
  }
  const auto fit = ols(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit.slope_p_value, 0.0, 1e-12);
  EXPECT_EQ(fit.n, 10u);
}

TEST(Ols, ClusteringVersusAverageDegreeFromPublishedTables) {
  // ln C against ln <k> over the six published (<k>, C) pairs.
  const std::vector<double> k{32.62, 38.09, 23.27, 23.60, 75.01, 47.34};
  const std::vector<double> c{0.6293, 0.6037, 0.6657, 0.6595, 0.5230, 0.5738};
  std::vector<double> x, y;
  for (std::size_t i = 0; i < k.size(); ++i) {
    x.push_back(std::log(k[i]));
    y.push_back(std::log(c[i]));
  }
  const auto fit = ols(x, y);
  // Published values are given to four decimals from rounded table inputs.
  EXPECT_NEAR(fit.intercept, 0.2400, 1e-4);
  EXPECT_NEAR(fit.slope, -0.2052, 1e-4);
  EXPECT_NEAR(fit.pearson_r, -0.9973, 1e-4);
  // scipy.stats.linregress on the same points.
  EXPECT_NEAR(fit.intercept, 0.2400516897971095, 1e-12);
  EXPECT_NEAR(fit.slope, -0.20524427344482704, 1e-12);
  EXPECT_NEAR(fit.pearson_r, -0.9972973819293952, 1e-12);
  EXPECT_NEAR(fit.slope_p_value, 1.0946346496968423e-05, 1e-9);
  EXPECT_NEAR(fit.slope_se, 0.007560144188543925, 1e-12);
  EXPECT_LT(fit.slope_p_value, 0.05);
  EXPECT_NEAR(*pearson(x, y), -0.9973, 5e-4);
}

TEST(Ols, NullCalibration) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  double mean_p = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(100), y(100);
    for (auto& v : x) v = normal(rng);
    for (auto& v : y) v = normal(rng);
    mean_p += ols(x, y).slope_p_value;
  }
  mean_p /= 50.0;
  EXPECT_GE(mean_p, 0.4);
  EXPECT_LE(mean_p, 0.6);
}

TEST(Ols, Errors) {
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3}, shorter{1, 2};
  EXPECT_THROW(ols(x, y), std::invalid_argument);
  EXPECT_THROW(ols(y, shorter), std::invalid_argument);
}

TEST(Ols, InvariantsOnRandomData) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 40;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = normal(rng);
      y[i] = 0.7 * x[i] + normal(rng);
    }
    const auto fit = ols(x, y);
    EXPECT_NEAR(fit.r_squared, fit.pearson_r * fit.pearson_r, 1e-12);
    EXPECT_NEAR(fit.adjusted_r_squared, 1.0 - (1.0 - fit.r_squared) * (n - 1.0) / (n - 2.0), 1e-12);
    EXPECT_GE(fit.slope_p_value, 0.0);
    EXPECT_LE(fit.slope_p_value, 1.0);

    double sum_res = 0.0, sum_res_x = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      sum_res += e;
      sum_res_x += e * x[i];
      scale += std::fabs(y[i]) * (1.0 + std::fabs(x[i]));
    }
    EXPECT_LE(std::fabs(sum_res), 1e-9 * scale);
    EXPECT_LE(std::fabs(sum_res_x), 1e-9 * scale);

    // Affine equivariance.
    const double a = std::fabs(coef(rng)) + 0.1, b = coef(rng), c = coef(rng) + 10.0, d = coef(rng);
    std::vector<double> x2(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      x2[i] = a * x[i] + b;
      y2[i] = c * y[i] + d;
    }
    const auto fit2 = ols(x2, y2);
    EXPECT_NEAR(fit2.slope, c / a * fit.slope, 1e-9 * (1.0 + std::fabs(c / a * fit.slope)));
    EXPECT_NEAR(fit2.r_squared, fit.r_squared, 1e-9);
    EXPECT_NEAR(fit2.slope_p_value, fit.slope_p_value, 1e-9);

    EXPECT_EQ(*pearson(x, y), *pearson(y, x));
  }
}

TEST(Pearson, ClosedForms) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> neg{-1, -2, -3, -4, -5};
  EXPECT_NEAR(*pearson(x, neg), -1.0, 1e-15);
  // y orthogonal to centered x.
  const std::vector<double> orth{1, -2, 0, 2, -1};
  EXPECT_NEAR(*pearson(x, orth), 0.0, 1e-12);
  const std::vector<double> flat{2, 2, 2, 2, 2};
  EXPECT_FALSE(pearson(x, flat).has_value());
}
