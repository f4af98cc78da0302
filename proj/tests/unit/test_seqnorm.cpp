#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <numeric>

#include "generators.hpp"
#include "qcm/error.hpp"
#include "qcm/seqnorm.hpp"

using namespace qcm;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

}  // namespace

TEST(BuildRho, PowerValues) {
  const auto rho = build_rho(GaugeSpec::power(1.5), 1, 3);
  ASSERT_EQ(rho.size(), 3U);
  EXPECT_NEAR(rho[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(rho[1], 2.0 / 3.0 * std::pow(2.0, -1.0 / 3.0), 1e-15);
  EXPECT_NEAR(rho[2], 2.0 / 3.0 * std::pow(3.0, -1.0 / 3.0), 1e-15);
  const auto r4 = build_rho(GaugeSpec::power(2.0), 4, 1);
  EXPECT_NEAR(r4[0], 0.25, 1e-15);
  EXPECT_EQ(r4.start_index(), 4);
  EXPECT_EQ(rho.generator(), WeightGenerator::rho_of_gauge);
  EXPECT_TRUE(rho.known_divergent());
}

TEST(BuildRho, Example37FirstWeight) {
  // h'(1) = 1/(W(e) + 1) = 1/2
  EXPECT_NEAR(build_rho(GaugeSpec::example37(), 1, 1)[0], 0.5, 1e-15);
}

TEST(BuildRho, ShiftIdentity) {
  for (const auto& g : {GaugeSpec::power(1.5), GaugeSpec::example37()}) {
    const auto full = build_rho(g, 1, 40);
    for (std::size_t n = 1; n <= 10; ++n) {
      const auto shifted = shift(full, n - 1);
      const auto direct = build_rho(g, static_cast<std::int64_t>(n), 40 - n + 1);
      ASSERT_EQ(shifted.size(), direct.size());
      EXPECT_EQ(shifted.start_index(), direct.start_index());
      for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_EQ(shifted[i], direct[i]);
    }
  }
}

TEST(BuildRho, IntegralBracketing) {
  for (const auto& g : {GaugeSpec::power(1.5), GaugeSpec::power(2.0), GaugeSpec::example37(),
                        GaugeSpec::power_log(1.5, 1.0)}) {
    for (std::int64_t n : {1, 5, 50}) {
      const auto rho = build_rho(g, n, 5000);
      const auto sums = rho.partial_sums();
      const double hn = h_and_hprime(g, static_cast<double>(n)).h;
      for (std::size_t len : {1U, 10U, 100U, 1000U, 5000U}) {
        const auto m = n + static_cast<std::int64_t>(len) - 1;
        const double hm = h_and_hprime(g, static_cast<double>(m)).h;
        EXPECT_GE(sums[len], hm - hn - 1e-12 * hm);
        EXPECT_LE(sums[len], rho[0] + hm - hn + 1e-12 * hm);
      }
    }
  }
}

TEST(WeightSequenceTest, Validation) {
  EXPECT_THROW(WeightSequence({}), LengthError);
  EXPECT_THROW(WeightSequence({0.0, 0.0}), DomainError);
  EXPECT_THROW(WeightSequence({1.0, 2.0}), MonotonicityError);
  EXPECT_THROW(WeightSequence({1.0, -0.5}), DomainError);
  EXPECT_THROW(WeightSequence({1.0}, 0), DomainError);
  const WeightSequence padded({1.0, 0.0, 0.0});
  EXPECT_EQ(padded.size(), 3U);
  EXPECT_FALSE(padded.known_divergent());
  EXPECT_EQ(padded.at_index(1), 1.0);
  EXPECT_THROW(padded.at_index(4), LengthError);
}

TEST(ChooseStartIndex, PowerIsOne) {
  for (double s : {1.0, 1.5, 2.0}) {
    EXPECT_EQ(choose_start_index(GaugeSpec::power(s), 1e-9, 4, 1000000), 1);
  }
}

TEST(ChooseStartIndex, Example37TightEpsilonNotReachedWithinHorizon) {
  EXPECT_THROW(choose_start_index(GaugeSpec::example37(), 0.05, 4, 1000000), NotFoundError);
  EXPECT_THROW(choose_start_index(GaugeSpec::example37(), 1e-12, 2, 1000), NotFoundError);
}

TEST(ChooseStartIndex, Example37LooseEpsilonRechecked) {
  const auto g = GaugeSpec::example37();
  const auto n = choose_start_index(g, 0.5, 2, 1000000);
  EXPECT_GE(n, 1);
  EXPECT_LE(n, 1000000);
  auto rng = gen::make_rng(17);
  for (int t = 0; t < 100; ++t) {
    const double k = std::round(gen::log_uniform(rng, static_cast<double>(n), 1e6));
    const double ratio = inverse(g, 1.0 / k) / inverse(g, 1.0 / (2.0 * k));
    EXPECT_LT(std::abs(ratio - 2.0), 0.5) << k;
  }
  const auto rho = build_rho(g, n, 1000);
  EXPECT_GT(rho[0], 0.0);
}

TEST(StartIndexGrid, DenseThenLogarithmic) {
  const auto grid = start_index_grid(1, 1000000);
  EXPECT_EQ(grid.front(), 1);
  EXPECT_EQ(grid[63], 64);
  EXPECT_EQ(grid.back(), 1000000);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  EXPECT_EQ(std::adjacent_find(grid.begin(), grid.end()), grid.end());
}

TEST(PhiNorm, Examples) {
  const WeightSequence pi({1.0, 0.5, 1.0 / 3.0});
  const std::vector<double> xs = {3.0, 1.0, 2.0};
  EXPECT_NEAR(phi_norm(pi, xs), 3.0 + 1.0 + 1.0 / 3.0, 1e-15);
  EXPECT_EQ(phi_norm(pi, std::vector<double>{0.0, 0.0, 0.0, 0.0, 0.0}), 0.0);
  const WeightSequence e1({1.0, 0.0, 0.0, 0.0, 0.0});
  const std::vector<double> ys = {0.3, -2.5, 1.0, 2.0};
  EXPECT_EQ(phi_norm(e1, ys), 2.5);
  EXPECT_THROW(phi_norm(pi, std::vector<double>{1, 1, 1, 1}), InsufficientWeightsError);
  EXPECT_NO_THROW(phi_norm(pi, std::vector<double>{1, 1, 1, 0, 0}));
}

TEST(PhiNorm, SymmetricGaugeProperties) {
  auto rng = gen::make_rng(23);
  for (int t = 0; t < gen::kTrials; ++t) {
    const std::size_t len = static_cast<std::size_t>(gen::uniform_int(rng, 1, 40));
    const WeightSequence pi(gen::random_weights(rng, len));
    auto xs = gen::random_vector(rng, len, -5.0, 5.0);
    const double base = phi_norm(pi, xs);

    auto permuted = xs;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    for (auto& x : permuted) {
      if (rng() & 1U) x = -x;
    }
    EXPECT_NEAR(phi_norm(pi, permuted), base, 1e-12 * base);

    const double c = gen::uniform(rng, 0.0, 10.0);
    auto scaled = xs;
    for (auto& x : scaled) x *= c;
    EXPECT_NEAR(phi_norm(pi, scaled), c * base, 1e-12 * (1 + c * base));

    auto larger = xs;
    for (auto& x : larger) x = (x < 0 ? -1 : 1) * (std::abs(x) + gen::uniform(rng, 0.0, 1.0));
    EXPECT_GE(phi_norm(pi, larger), base * (1 - 1e-14));
  }
}

TEST(PhiNorm, TriangleInequalityOnMatrices) {
  auto rng = gen::make_rng(29);
  for (int t = 0; t < gen::kTrials; ++t) {
    const int n = gen::uniform_int(rng, 1, 8);
    Eigen::MatrixXd a(n, n);
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) = gen::uniform(rng, -1, 1);
        b(i, j) = gen::uniform(rng, -1, 1);
      }
    }
    const WeightSequence pi(gen::random_weights(rng, static_cast<std::size_t>(n)));
    const double lhs = phi_norm(pi, singular_values(a + b));
    const double rhs = phi_norm(pi, singular_values(a)) + phi_norm(pi, singular_values(b));
    EXPECT_LE(lhs, rhs * (1 + 1e-12));
  }
}

TEST(PhiNorm, ShiftBound) {
  auto rng = gen::make_rng(31);
  for (int t = 0; t < gen::kTrials; ++t) {
    const std::size_t len = static_cast<std::size_t>(gen::uniform_int(rng, 2, 40));
    const WeightSequence pi(gen::random_weights(rng, len + 1));
    const auto xs = gen::random_vector(rng, len, 0.0, 3.0);
    const double gap = phi_norm(pi, xs) - phi_norm(shift(pi, 1), xs);
    EXPECT_GE(gap, -1e-14);
    EXPECT_LE(gap, pi[0] * *std::max_element(xs.begin(), xs.end()) * (1 + 1e-12));
  }
}

TEST(PhiNorm, SpectrumOverloadMatchesSpan) {
  auto rng = gen::make_rng(37);
  for (int t = 0; t < 50; ++t) {
    const auto xs = gen::random_vector(rng, 30, 0.0, 2.0);
    const WeightSequence pi(gen::random_weights(rng, 30));
    EXPECT_EQ(phi_norm(pi, SingularSpectrum(xs)), phi_norm(pi, xs));
  }
}

TEST(RegularityAlpha, Examples) {
  std::vector<double> cube(10000);
  for (std::size_t k = 0; k < cube.size(); ++k) cube[k] = std::pow(static_cast<double>(k + 1), -1.0 / 3.0);
  EXPECT_LT(rel(regularity_alpha(WeightSequence(cube), 10000), 1.5), 0.01);
  EXPECT_DOUBLE_EQ(regularity_alpha(WeightSequence(std::vector<double>(100, 0.3)), 100), 1.0);
  const double harmonic = regularity_alpha(harmonic_weights(10000), 10000);
  EXPECT_NEAR(harmonic, std::log(1e4) + 0.57721566490153286, 1e-4);
  EXPECT_NEAR(harmonic, 9.7876, 1e-3);
  EXPECT_THROW(regularity_alpha(harmonic_weights(10), 11), LengthError);
}

TEST(Shift, Examples) {
  const WeightSequence pi({1.0, 0.5, 1.0 / 3.0});
  const auto s1 = shift(pi, 1);
  ASSERT_EQ(s1.size(), 2U);
  EXPECT_EQ(s1[0], 0.5);
  EXPECT_EQ(s1[1], 1.0 / 3.0);
  EXPECT_EQ(s1.start_index(), 2);
  const auto s0 = shift(pi, 0);
  EXPECT_EQ(std::vector<double>(s0.values().begin(), s0.values().end()),
            std::vector<double>(pi.values().begin(), pi.values().end()));
  EXPECT_THROW(shift(pi, 3), LengthError);
}

TEST(ObstructionWindow, PowerIsOneOverS) {
  for (double s : {1.5, 2.0}) {
    const auto g = GaugeSpec::power(s);
    const auto rho = build_rho(g, 1, 100000);
    const auto w = obstruction_window(g, rho, 1, 100000);
    EXPECT_LE(std::abs(w.inf - 1.0 / s), 1e-12);
    EXPECT_LE(std::abs(w.sup - 1.0 / s), 1e-12);
    EXPECT_EQ(w.count, 100000);
  }
}

TEST(ObstructionWindow, Example37Band) {
  const auto g = GaugeSpec::example37();
  const auto rho = build_rho(g, 1, 1000000);
  const auto w = obstruction_window(g, rho, 1, 1000000);
  EXPECT_GE(w.inf, 0.5 - 1e-12);
  EXPECT_LE(w.sup, 2.0);
  EXPECT_NEAR(w.first, 0.5, 1e-12);
  EXPECT_GT(w.last, w.first);
  // u/(u+1), u = W(e m)
  const double u = lambert_w(std::numbers::e * 1e6);
  EXPECT_LT(rel(w.last, u / (u + 1)), 1e-9);
  EXPECT_THROW(obstruction_window(g, rho, 0, 10), LengthError);
}

TEST(VanishingSequence, HarmonicDecays) {
  const auto g = GaugeSpec::power(1.5);
  const auto pi = harmonic_weights(1000000);
  const std::vector<std::int64_t> ms = {10, 100, 1000};
  const auto v = vanishing_sequence(g, pi, 2, ms);
  // mpmath: m^{-4/3} H_{m^2}
  EXPECT_LT(rel(v[0], 0.24077673561610037), 1e-12);
  EXPECT_LT(rel(v[1], 0.021086757976419473), 1e-11);
  EXPECT_LT(rel(v[2], 0.0014392726722865807), 1e-10);
  EXPECT_GT(v[0], v[1]);
  EXPECT_GT(v[1], v[2]);
}

TEST(VanishingSequence, RhoConvergesToPositiveConstant) {
  const auto g = GaugeSpec::power(1.5);
  const auto rho = build_rho(g, 1, 1000000);
  const std::vector<std::int64_t> ms = {10, 100, 1000};
  const auto v = vanishing_sequence(g, rho, 2, ms);
  for (double x : v) EXPECT_GT(x, 0.9);
  EXPECT_LT(std::abs(v[2] - 1.0), 1e-3);
}

TEST(VanishingSequence, SingleWeightTendsToZero) {
  std::vector<double> single(10000, 0.0);
  single[0] = 1.0;
  const std::vector<std::int64_t> ms = {1, 10, 100};
  const auto v = vanishing_sequence(GaugeSpec::power(1.5), WeightSequence(single), 2, ms);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_GT(v[0], v[1]);
  EXPECT_GT(v[1], v[2]);
  EXPECT_LT(v[2], 1e-2);
  EXPECT_THROW(vanishing_sequence(GaugeSpec::power(1.5), WeightSequence(single), 3, ms),
               InsufficientWeightsError);
}
