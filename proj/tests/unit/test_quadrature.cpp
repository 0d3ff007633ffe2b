#include "spa/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

using namespace spa;

TEST(SimpsonWeights, IntegratesCubicsExactly)
{
  const auto w = simpson_weights(-1.0, 2.0, 7);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = -1.0 + 0.5 * static_cast<double>(i);
    s += w[i] * (x * x * x - 2 * x + 1);
  }
  EXPECT_NEAR(s, (16.0 / 4 - 4 + 2) - (0.25 - 1 - 1), 1e-13);
}

TEST(SimpsonWeights, EvenCountFallsBackToTrapezoid)
{
  const auto w = simpson_weights(0.0, 3.0, 4);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 1.0);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 3.0, 1e-15);
}

TEST(SimpsonWeights, RejectsFewerThanTwoNodes)
{
  EXPECT_THROW(simpson_weights(0.0, 1.0, 1), std::invalid_argument);
}

TEST(LogIntegrate, GaussianHandlesHugeOffsets)
{
  const double v = log_integrate([](double x) { return 1000.0 - 0.5 * x * x; }, -12, 12, 2001);
  EXPECT_NEAR(v, 1000.0 + 0.5 * std::log(2 * M_PI), 1e-10);
}

TEST(LogSumExp, StableAndExact)
{
  EXPECT_NEAR(log_sum_exp(std::vector<double>{1000.0, 1000.0}), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_NEAR(log_sum_exp(std::vector<double>{-1e4, 0.0}), 0.0, 1e-15);
  const double ninf = -std::numeric_limits<double>::infinity();
  EXPECT_EQ(log_sum_exp(std::vector<double>{ninf, ninf}), ninf);
  EXPECT_EQ(log_sum_exp(std::vector<double>{}), ninf);
}
