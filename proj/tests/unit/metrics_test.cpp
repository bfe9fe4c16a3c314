#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "circuitkit/error.hpp"
#include "circuitkit/metrics.hpp"

namespace circuitkit {
namespace {

FaithfulnessCurve curve(std::vector<std::pair<double, double>> pts) {
  std::vector<CurvePoint> out;
  for (auto [x, y] : pts) out.push_back({x, y});
  return FaithfulnessCurve(out);
}

TEST(Curve, Validation) {
  EXPECT_THROW(curve({{0, 1}}), InvalidInput);
  EXPECT_THROW(curve({{0.5, 1}, {0.5, 2}}), InvalidInput);
  EXPECT_THROW(curve({{0.6, 1}, {0.5, 2}}), InvalidInput);
  EXPECT_THROW(curve({{0, 1}, {1.5, 2}}), InvalidInput);
  EXPECT_THROW(curve({{0, NAN}, {1, 2}}), InvalidInput);
}

TEST(Cpr, Examples) {
  EXPECT_EQ(cpr(curve({{0, 2}, {1, 2}})), 2.0);
  EXPECT_EQ(cpr(curve({{0, 0}, {1, 1}})), 0.5);
  EXPECT_EQ(cpr(curve({{0, 0}, {0.5, 1}, {1, 1}})), 0.75);
  EXPECT_EQ(cpr(curve({{0.25, 3}, {0.75, 3}})), 3.0);
}

TEST(Cmd, Examples) {
  EXPECT_EQ(cmd(curve({{0, 1}, {1, 1}})), 0.0);
  EXPECT_EQ(cmd(curve({{0, 0.5}, {1, 0.5}})), 0.5);
  EXPECT_EQ(cmd(curve({{0, 0}, {1, 2}})), 0.5);
  EXPECT_EQ(cmd(curve({{0, 1.5}, {1, 1.5}})), 0.5);
}

TEST(Cmd, ZeroOnlyForOptimalCurve) {
  EXPECT_GT(cmd(curve({{0, 1}, {0.5, 1}, {1, 1.0625}})), 0.0);
  EXPECT_EQ(cmd(curve({{0.1, 1}, {0.2, 1}, {0.9, 1}})), 0.0);
}

TEST(Metrics, SumToOneBelowOptimal) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::pair<double, double>> pts;
    const int n = 2 + static_cast<int>(rng() % 8);
    for (int j = 0; j < n; ++j) {
      pts.push_back({j / 8.0, static_cast<double>(rng() % 17) / 16.0});
    }
    const auto c = curve(pts);
    EXPECT_EQ(cpr(c) + cmd(c), 1.0);
  }
}

TEST(Metrics, CollinearInsertionInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> y(-1, 3);
  for (int i = 0; i < 300; ++i) {
    const double y0 = y(rng), y1 = y(rng);
    const auto base = curve({{0.0, y0}, {1.0, y1}});
    const double t = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const auto split = curve({{0.0, y0}, {t, y0 + t * (y1 - y0)}, {1.0, y1}});
    EXPECT_NEAR(cpr(base), cpr(split), 1e-12);
    EXPECT_NEAR(cmd(base), cmd(split), 1e-12);
  }
}

TEST(Metrics, LipschitzInPointValues) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> y(-1, 3);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::pair<double, double>> pts{{0, y(rng)}, {0.3, y(rng)}, {1, y(rng)}};
    const auto a = curve(pts);
    const double eps = 1e-3;
    pts[rng() % 3].second += eps;
    const auto b = curve(pts);
    EXPECT_LE(std::fabs(cpr(a) - cpr(b)), eps + 1e-15);
    EXPECT_LE(std::fabs(cmd(a) - cmd(b)), eps + 1e-15);
  }
}

TEST(SweepSizes, ExplicitFractions) {
  SizeGrid grid;
  grid.fractions = {0.01, 0.1, 1.0};
  EXPECT_EQ(sweep_sizes(100, grid), (std::vector<std::size_t>{1, 10, 100}));
  grid.fractions = {0.011, 0.012, 0.5, 0.0};
  EXPECT_EQ(sweep_sizes(100, grid), (std::vector<std::size_t>{1, 50}));
}

TEST(SweepSizes, LogGrid) {
  EXPECT_EQ(sweep_sizes(1000),
            (std::vector<std::size_t>{1, 2, 5, 10, 22, 46, 100, 215, 464, 1000}));
  const auto small = sweep_sizes(3);
  EXPECT_EQ(small, (std::vector<std::size_t>{1, 3}));
}

TEST(SweepSizes, RejectsEmptyTotal) {
  EXPECT_THROW(sweep_sizes(0), InvalidInput);
}

}  // namespace
}  // namespace circuitkit
