// Copyright 2026 The ERD Authors
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

#include <gtest/gtest.h>

#include <random>

#include "erd/noise.hpp"

namespace erd {
namespace {

SpectralNoise white_band() {
  SpectralNoise s;
  s.alpha = 0.0;
  s.omega_min = 0.1;
  s.omega_max = 2.0;
  s.amplitude = 0.1;
  s.n_harmonics = 512;
  s.seed = 4;
  return s;
}

TEST(Seeding, TrajectorySeedsAreStable) {
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_NE(trajectory_seed(1, 0), trajectory_seed(1, 1));
  EXPECT_NE(trajectory_seed(1, 0), trajectory_seed(2, 0));
  EXPECT_EQ(trajectory_seed(9, 17), trajectory_seed(9, 17));
}

TEST(SpectralNoise, Validation) {
  SpectralNoise s = white_band();
  s.omega_min = 3.0;
  EXPECT_THROW(s.validate(), DomainError);
  s = white_band();
  s.n_harmonics = 4;
  EXPECT_THROW(s.validate(), DomainError);
  s = white_band();
  EXPECT_DOUBLE_EQ(s.psd(1.0), 0.01);
  EXPECT_DOUBLE_EQ(s.psd(5.0), 0.0);
}

TEST(SpectralNoise, VarianceMatchesBandIntegral) {
  SpectralNoise s = white_band();
  s.alpha = 1.0;
  double acc = 0.0;
  const int n = 400;
  for (int k = 0; k < n; ++k) {
    std::mt19937_64 rng(trajectory_seed(s.seed, k));
    const NoiseRealization r(s, rng);
    const double v = r.value(0.3);
    acc += v * v;
  }
  const double expect = s.amplitude * s.amplitude * std::log(s.omega_max / s.omega_min);
  EXPECT_NEAR(acc / n, expect, 0.15 * expect);
}

TEST(NoiseRealization, IntegralsMatchQuadrature) {
  const SpectralNoise s = white_band();
  std::mt19937_64 rng(5);
  const NoiseRealization r(s, rng);
  const auto ints = r.integrals(0.5, 4);
  const auto fine = r.grid(0.0, 1e-4, 20000);
  for (int k = 0; k < 4; ++k) {
    double q = 0.0;
    for (int j = 0; j < 5000; ++j) {
      const double a = fine[k * 5000 + j];
      const double b = j + 1 < 5000 ? fine[k * 5000 + j + 1] : r.value(0.5 * (k + 1));
      q += 0.5 * (a + b) * 1e-4;
    }
    EXPECT_NEAR(ints[k], q, 1e-9);
  }
}

TEST(Sampling, NyquistGuard) {
  const SpectralNoise s = white_band();
  EXPECT_THROW(sample_1f_trajectory(s, 10.0, M_PI / s.omega_max), DomainError);
  EXPECT_EQ(sample_1f_trajectory(s, 10.0, 0.5).size(), 20u);
  EXPECT_EQ(sample_1f_trajectory(s, 10.0, 0.5, 3), sample_1f_trajectory(s, 10.0, 0.5, 3));
}

TEST(Sampling, PsdSlopeTracksAlpha) {
  for (double alpha : {0.0, 1.0, 2.0}) {
    SpectralNoise s;
    s.alpha = alpha;
    s.omega_min = 0.01;
    s.omega_max = 3.0;
    s.amplitude = 1.0;
    s.n_harmonics = 8192;
    s.seed = 2;
    const auto x = sample_1f_trajectory(s, 1e4, 1.0);
    EXPECT_NEAR(psd_slope(x, 1.0, 0.03, 1.0), -alpha, 0.3) << alpha;
  }
}

TEST(LogLogSlope, ExactOnPowerLaw) {
  std::vector<double> x, y;
  for (double v : {1.0, 2.0, 5.0, 11.0}) {
    x.push_back(v);
    y.push_back(3.0 * std::pow(v, -1.7));
  }
  EXPECT_NEAR(loglog_slope(x, y), -1.7, 1e-13);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), DomainError);
}

TEST(FirstCrossing, Interpolates) {
  const double e = std::exp(-1.0);
  const auto c = first_crossing({0.0, 1.0, 2.0}, {1.0, e + 0.1, e - 0.1});
  ASSERT_TRUE(c.has_value());
  EXPECT_NEAR(*c, 1.5, 1e-12);
  EXPECT_FALSE(first_crossing({0.0, 1.0}, {1.0, 0.9}).has_value());
}

TEST(Dephasing, CommonStepRules) {
  EXPECT_DOUBLE_EQ(detail::common_step(four_pulse_cycle(0.25)), 0.25);
  EXPECT_THROW(detail::common_step(PulseSequence({Free{0.2}, Free{0.3}})), DomainError);
  EXPECT_THROW(detail::common_step(PulseSequence::parse("[P]")), DomainError);
}

TEST(Dephasing, CollectiveNoiseLeavesCodeCoherent) {
  SpectralNoise s = white_band();
  s.amplitude = 3.0;
  DephasingOptions o;
  o.mode = NoiseMode::Collective;
  o.n_traj = 16;
  const auto r = dephasing_run(symmetrize_pair(0.5), s, o);
  for (double c : r.coherence) EXPECT_NEAR(c, 1.0, 1e-12);
  EXPECT_FALSE(r.crossed);
}

TEST(Dephasing, GaussianDecayMatchesFilterIntegral) {
  const SpectralNoise s = white_band();
  DephasingOptions o;
  o.n_traj = 4000;
  o.horizon = 12.0;
  const auto r = dephasing_run(PulseSequence({Free{0.5}}), s, o);
  for (std::size_t k = 0; k < r.times.size(); k += 4) {
    const double t = r.times[k];
    // Relative phase 4 int xi; Var = int 4 S sin^2(w t / 2) / w^2 dw per unit.
    double var = 0.0;
    const int n = 20000;
    const double dw = (s.omega_max - s.omega_min) / n;
    for (int j = 0; j < n; ++j) {
      const double w = s.omega_min + (j + 0.5) * dw;
      var += s.psd(w) * 4.0 * std::pow(std::sin(w * t / 2), 2) / (w * w) * dw;
    }
    EXPECT_NEAR(r.coherence[k], std::exp(-8.0 * var), 0.03) << t;
  }
}

TEST(Dephasing, ResultIndependentOfJobs) {
  const SpectralNoise s = white_band();
  DephasingOptions o;
  o.n_traj = 37;
  o.horizon = 8.0;
  const auto a = dephasing_run(symmetrize_pair(0.5), s, o);
  o.jobs = 3;
  const auto b = dephasing_run(symmetrize_pair(0.5), s, o);
  EXPECT_EQ(a.coherence, b.coherence);
  EXPECT_EQ(a.times, b.times);
}

TEST(Dephasing, TrajectoryCountValidated) {
  DephasingOptions o;
  o.n_traj = 5;
  o.min_traj = 10;
  EXPECT_THROW(dephasing_run(symmetrize_pair(0.5), white_band(), o), DomainError);
}

TEST(Dephasing, HorizonDoublesUntilCrossing) {
  SpectralNoise s = white_band();
  DephasingOptions o;
  o.n_traj = 50;
  o.horizon = 1.0;
  o.max_horizon = 64.0;
  const auto r = dephasing_run(PulseSequence({Free{0.5}}), s, o);
  EXPECT_TRUE(r.crossed);
  EXPECT_GT(r.times.back(), 1.0);
  EXPECT_LT(r.t2, r.times.back());
}

TEST(Scan, CsvLayoutAndGridGuard) {
  const SpectralNoise s = white_band();
  DephasingOptions o;
  o.n_traj = 20;
  o.horizon = 20.0;
  const auto fam = [](double dt) { return symmetrize_pair(dt); };
  EXPECT_THROW(suppression_scan(fam, {0.5, 0.25, 0.125}, s, o), DomainError);
  const auto rows = suppression_scan(fam, {1.0, 0.5, 0.25, 0.125}, s, o, 0.125);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].t2_base, rows[3].t2_base);
  const auto csv = scan_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dt,t2_base,t2_pulsed,gain,n_traj,seed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(format_g17(0.1), "0.10000000000000001");
}

}  // namespace
}  // namespace erd
