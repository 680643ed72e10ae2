// Copyright 2026 Coalshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coalshare/projection.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace coalshare {
namespace {

std::vector<double> projected(std::vector<double> v, double cap) {
  std::vector<double> scratch;
  project_capped_simplex(v.data(), static_cast<int>(v.size()), cap, scratch);
  return v;
}

TEST(CappedSimplex, ClampsWhenSumIsSlack) {
  const auto out = projected({-1.0, 0.5, 0.3}, 2.0);
  EXPECT_DOUBLE_EQ(out[0], 0.0);
  EXPECT_DOUBLE_EQ(out[1], 0.5);
  EXPECT_DOUBLE_EQ(out[2], 0.3);
}

TEST(CappedSimplex, HandWorkedThresholdCases) {
  // (3, 1) against cap 2: shift both down by theta = 1.
  auto out = projected({3.0, 1.0}, 2.0);
  EXPECT_NEAR(out[0], 2.0, 1e-12);
  EXPECT_NEAR(out[1], 0.0, 1e-12);

  // Symmetric breach splits the cap evenly.
  out = projected({2.0, 2.0}, 2.0);
  EXPECT_NEAR(out[0], 1.0, 1e-12);
  EXPECT_NEAR(out[1], 1.0, 1e-12);

  // Negative coordinate drops out before the threshold is computed.
  out = projected({4.0, -1.0}, 2.0);
  EXPECT_NEAR(out[0], 2.0, 1e-12);
  EXPECT_NEAR(out[1], 0.0, 1e-12);
}

TEST(CappedSimplex, ZeroCapGivesOrigin) {
  const auto out = projected({1.0, 2.0, 3.0}, 0.0);
  for (double v : out) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(CappedSimplex, IdempotentOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(6);
    for (double& c : v) c = dist(rng);
    const auto once = projected(v, 4.0);
    const auto twice = projected(once, 4.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_NEAR(once[i], twice[i], 1e-12);
    }
  }
}

TEST(CappedSimplex, SatisfiesVariationalInequality) {
  // For the true projection p of z, <z - p, y - p> <= 0 for every feasible y.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-2.0, 4.0);
  const double cap = 3.0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> z(5);
    for (double& c : z) c = dist(rng);
    const auto p = projected(z, cap);

    double sum = 0.0;
    for (double c : p) {
      EXPECT_GE(c, 0.0);
      sum += c;
    }
    EXPECT_LE(sum, cap + 1e-10);

    for (int probe = 0; probe < 20; ++probe) {
      std::vector<double> y(5);
      for (double& c : y) c = std::abs(dist(rng));
      const auto yf = projected(y, cap);
      double inner = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        inner += (z[i] - p[i]) * (yf[i] - p[i]);
      }
      EXPECT_LE(inner, 1e-9);
    }
  }
}

TEST(MatrixProjector, LeavesFeasiblePointsAlone) {
  CappedMatrixProjector proj({4.0, 4.0}, {3.0, 3.0, 3.0});
  std::vector<double> x = {1.0, 0.5, 0.5, 0.0, 1.0, 2.0};
  const std::vector<double> before = x;
  proj.project(x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], before[i], 1e-9);
}

TEST(MatrixProjector, SingleCellIsMinOfCaps) {
  CappedMatrixProjector proj({2.0}, {1.5});
  std::vector<double> x = {5.0};
  proj.project(x);
  EXPECT_NEAR(x[0], 1.5, 1e-9);

  x = {-3.0};
  proj.project(x);
  EXPECT_NEAR(x[0], 0.0, 1e-9);
}

TEST(MatrixProjector, SymmetricOverloadSplitsEvenly) {
  // All cells at 2 with unit row and column caps: the projection is the
  // symmetric point with every cell at 0.5.
  CappedMatrixProjector proj({1.0, 1.0}, {1.0, 1.0});
  std::vector<double> x = {2.0, 2.0, 2.0, 2.0};
  proj.project(x);
  for (double v : x) EXPECT_NEAR(v, 0.5, 1e-8);
}

TEST(MatrixProjector, OutputIsAlwaysFeasible) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 3.0);
  const std::vector<double> row_cap = {2.0, 5.0, 0.0};
  const std::vector<double> col_cap = {1.0, 4.0, 2.5, 3.0};
  CappedMatrixProjector proj(row_cap, col_cap);

  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> x(12);
    for (double& c : x) c = dist(rng);
    proj.project(x);

    for (double v : x) EXPECT_GE(v, 0.0);
    for (int r = 0; r < 3; ++r) {
      double sum = 0.0;
      for (int c = 0; c < 4; ++c) sum += x[static_cast<std::size_t>(r) * 4 + c];
      EXPECT_LE(sum, row_cap[r] + 1e-9);
    }
    for (int c = 0; c < 4; ++c) {
      double sum = 0.0;
      for (int r = 0; r < 3; ++r) sum += x[static_cast<std::size_t>(r) * 4 + c];
      EXPECT_LE(sum, col_cap[c] + 1e-9);
    }
  }
}

TEST(MatrixProjector, SatisfiesVariationalInequality) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 2.5);
  const std::vector<double> row_cap = {3.0, 2.0};
  const std::vector<double> col_cap = {2.0, 2.0, 1.0};
  CappedMatrixProjector proj(row_cap, col_cap);

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> z(6);
    for (double& c : z) c = dist(rng);
    std::vector<double> p = z;
    proj.project(p);

    for (int probe = 0; probe < 20; ++probe) {
      std::vector<double> y(6);
      for (double& c : y) c = std::abs(dist(rng));
      proj.project(y);
      double inner = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        inner += (z[i] - p[i]) * (y[i] - p[i]);
      }
      EXPECT_LE(inner, 1e-6);
    }
  }
}

TEST(MatrixProjector, IdempotentUpToTolerance) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> dist(-2.0, 4.0);
  CappedMatrixProjector proj({2.0, 3.0}, {1.0, 2.0});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(4);
    for (double& c : x) c = dist(rng);
    proj.project(x);
    std::vector<double> again = x;
    proj.project(again);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], again[i], 1e-7);
  }
}

}  // namespace
}  // namespace coalshare
