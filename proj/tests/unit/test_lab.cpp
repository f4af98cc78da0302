#include <gtest/gtest.h>

#include <cmath>

#include "qcm/error.hpp"
#include "qcm/lab.hpp"

using namespace qcm;

namespace {

const GaugeSpec kPower = GaugeSpec::power(1.5);

double sum_weights(const WeightSequence& pi, std::size_t count) { return pi.partial_sums()[count]; }

}  // namespace

TEST(KUpperCurve, ColumnsAndBound) {
  const auto rho = build_rho(kPower, 1, 1 << 16);
  const auto r = k_upper_curve(kPower, 2, rho, 8, 1, 7);
  EXPECT_EQ(r.columns, (std::vector<std::string>{"L", "cells", "norm", "supnorm_bound", "lemma31_bound"}));
  ASSERT_EQ(r.rows.size(), 7U);
  const auto c = build_complex(kPower, 8);
  for (const auto& row : r.rows) {
    const int level = static_cast<int>(row[0]);
    const double bound = 2 * std::sqrt(2.0) * c.lambda(level) * sum_weights(rho, std::size_t{1} << (2 * level));
    EXPECT_DOUBLE_EQ(row[4], bound);
    EXPECT_LE(row[2], row[4]);
  }
  EXPECT_TRUE(r.passed());
  ASSERT_NE(r.verdict("curve_bounded"), nullptr);
  EXPECT_TRUE(r.verdict("curve_bounded")->passed);
  EXPECT_GT(r.metadata.at("kappa_upper").get<double>(), 0.0);
}

TEST(KUpperCurve, HarmonicWeightsVanish) {
  const auto pi = harmonic_weights(1 << 16);
  const auto r = k_upper_curve(kPower, 2, pi, 8, 1, 7);
  const auto norms = r.column("norm");
  for (std::size_t i = 1; i < norms.size(); ++i) EXPECT_LT(norms[i], norms[i - 1]);
  EXPECT_LT(norms.back() / norms.front(), 0.05);
  ASSERT_NE(r.verdict("curve_vanishing"), nullptr);
  EXPECT_TRUE(r.verdict("curve_vanishing")->passed);
}

TEST(KUpperCurve, LevelZeroExcluded) {
  const auto rho = build_rho(kPower, 1, 4096);
  EXPECT_THROW(k_upper_curve(kPower, 2, rho, 6, 0, 3), DomainError);
  EXPECT_THROW(k_upper_curve(kPower, 2, rho, 6, 2, 6), DepthError);
  EXPECT_THROW(k_upper_curve(kPower, 2, WeightSequence({1.0}), 6, 1, 3), InsufficientWeightsError);
}

TEST(KUpperCurve, ThreadCountDoesNotChangeRows) {
  const auto rho = build_rho(GaugeSpec::example37(), 1, 1 << 14);
  const auto a = k_upper_curve(GaugeSpec::example37(), std::nullopt, rho, 7, 1, 6, 1);
  const auto b = k_upper_curve(GaugeSpec::example37(), std::nullopt, rho, 7, 1, 6, 4);
  EXPECT_EQ(a.rows, b.rows);
}

TEST(Ampliation, PowerGaugeHomogeneity) {
  const auto rho = build_rho(kPower, 1, 2 * 4096 * 16);
  const std::vector<int> ms = {1, 2, 4, 8, 16};
  const auto r = ampliation_check(kPower, 2, rho, 8, 6, ms, 0.05);
  const auto rel = r.column("relative_deviation");
  EXPECT_EQ(rel[0], 0.0);
  for (double v : rel) EXPECT_LE(v, 0.05);
  EXPECT_TRUE(r.passed());
}

TEST(Ampliation, UnitWeightsAreLinear) {
  const auto g = GaugeSpec::power(1.0);
  const WeightSequence unit(std::vector<double>(2 * 256 * 8, 1.0));
  const std::vector<int> ms = {2, 3, 8};
  const auto r = ampliation_check(g, 2, unit, 5, 4, ms, 1e-12);
  for (double v : r.column("relative_deviation")) EXPECT_LE(v, 1e-15);
}

TEST(SubcubeScaling, PowerGaugeIsExact) {
  const auto rho = build_rho(kPower, 1, 4096);
  const std::vector<int> lengths = {0, 1, 2};
  const std::vector<int> depths = {1, 2, 3, 4};
  const auto r = subcube_scaling_check(kPower, 2, rho, lengths, depths, 5);
  EXPECT_TRUE(r.verdict("scaling_exact")->passed);
  EXPECT_TRUE(r.verdict("congruent_words_identical")->passed);
  for (const auto& row : r.rows) {
    if (row[0] == 0) EXPECT_EQ(row[3], row[4]);
  }
  EXPECT_TRUE(r.passed());
}

TEST(SubcubeScaling, Example37IsApproximate) {
  const auto rho = build_rho(GaugeSpec::example37(), 1, 1024);
  const std::vector<int> lengths = {1, 2};
  const std::vector<int> depths = {2};
  const auto r = subcube_scaling_check(GaugeSpec::example37(), std::nullopt, rho, lengths, depths, 4);
  ASSERT_NE(r.verdict("scaling_approx"), nullptr);
  EXPECT_FALSE(r.verdict("scaling_approx")->fatal);
  EXPECT_TRUE(r.verdict("congruent_words_identical")->passed);
}

TEST(KappaEstimate, PowerGaugeFinitePositive) {
  const auto g = GaugeSpec::power(1.0);
  const auto rho = build_rho(g, 1, 1 << 14);
  const auto k = kappa_estimate(g, 2, rho, 7, 1, 6);
  EXPECT_GT(k.value, 0.0);
  EXPECT_TRUE(std::isfinite(k.value));
  EXPECT_EQ(k.upper_estimates.size(), 6U);
}

TEST(KappaEstimate, SubcubeMatchesRootForPowerGauge) {
  const auto rho = build_rho(kPower, 1, 1 << 12);
  const auto c = build_complex(kPower, 8);
  const double s = 1.5;
  for (int d = 1; d <= 4; ++d) {
    const double root = family_upper_estimate(c, {Word(2)}, d, 6, rho);
    const double sub = family_upper_estimate(c, {Word(2, {3, 2})}, d, 6, rho);
    const double kappa_root = std::pow(root, s);
    const double kappa_sub = std::pow(sub, s) / std::ldexp(1.0, -4);
    EXPECT_LE(std::abs(kappa_sub - kappa_root), 1e-12 * kappa_root);
  }
}

TEST(SmallSet, RatiosBoundedForPowerGauge) {
  const auto rho = build_rho(kPower, 1, 4 * 256);
  const std::vector<int> ks = {1, 2, 4};
  const std::vector<int> levels = {1, 2, 3, 4};
  const auto families = small_set_families(2, ks, levels);
  EXPECT_EQ(families.size(), 12U);
  const auto r = small_set_bound_check(kPower, 2, rho, families, 3, 4);
  EXPECT_TRUE(r.verdict("ratio_spread")->passed);
  const auto measures = r.column("measure");
  EXPECT_EQ(measures[0], 0.25);
  EXPECT_EQ(measures[2], 1.0);
}

TEST(SmallSet, FullSetGivesRootEstimate) {
  const auto rho = build_rho(kPower, 1, 4096);
  const auto c = build_complex(kPower, 5);
  const auto all = shrinking_families(2, ShrinkingKind::constant, std::vector<int>{1});
  const auto r = small_set_bound_check(kPower, 2, rho, all, 3, 4);
  EXPECT_EQ(r.rows[0][3], 1.0);
  EXPECT_DOUBLE_EQ(r.rows[0][4], family_upper_estimate(c, {Word(2)}, 4, 5, rho));
}

TEST(SingularDemo, SingleCellDecaysAtScalingRate) {
  const auto rho = build_rho(kPower, 1, 256);
  const std::vector<int> levels = {1, 2, 3, 4, 5, 6};
  const auto r = singular_demo(kPower, 2, rho, shrinking_families(2, ShrinkingKind::single, levels), 3, 4);
  const auto u = r.column("U");
  for (std::size_t i = 1; i < u.size(); ++i) {
    EXPECT_NEAR(u[i] / u[i - 1], std::pow(2.0, -2.0 / 1.5), 1e-12);
  }
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.verdict("decay")->passed);
}

TEST(SingularDemo, ConstantFamilyDoesNotDecay) {
  const auto rho = build_rho(kPower, 1, 1 << 16);
  const std::vector<int> levels = {1, 2, 3, 4};
  const auto r = singular_demo(kPower, 2, rho, shrinking_families(2, ShrinkingKind::constant, levels), 3, 4);
  for (double m : r.column("measure")) EXPECT_EQ(m, 1.0);
  EXPECT_FALSE(r.verdict("decay")->passed);
  EXPECT_FALSE(r.verdict("decay")->fatal);
}

TEST(SingularDemo, PairFamilyDecaysToo) {
  const auto rho = build_rho(kPower, 1, 512);
  const std::vector<int> levels = {1, 2, 3, 4, 5};
  const auto r = singular_demo(kPower, 2, rho, shrinking_families(2, ShrinkingKind::pair, levels), 3, 4);
  const auto u = r.column("U");
  EXPECT_LT(u.back() / u.front(), 0.1);
  EXPECT_TRUE(r.passed());
}

TEST(ShiftInvariance, GapBoundsAndMonotonicity) {
  const auto rho = build_rho(kPower, 1, (1 << 16) + 4);
  const std::vector<int> shifts = {0, 1, 2, 4};
  const auto r = shift_invariance_check(kPower, 2, rho, 8, 2, 7, shifts);
  for (const auto& row : r.rows) {
    if (row[1] == 0) EXPECT_EQ(row[4], 0.0);
  }
  const auto c = build_complex(kPower, 8);
  for (const auto& row : r.rows) {
    if (row[0] == 7 && row[1] == 1) EXPECT_LE(row[4], rho[0] * 2 * std::sqrt(2.0) * c.lambda(7));
  }
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.verdict("gap_decay")->passed);
}

TEST(Families, Validation) {
  EXPECT_THROW(small_set_families(2, std::vector<int>{5}, std::vector<int>{1}), DomainError);
  EXPECT_THROW(parse_shrinking_kind("triple"), DomainError);
  EXPECT_EQ(parse_shrinking_kind("pair"), ShrinkingKind::pair);
  const auto c = build_complex(kPower, 4);
  const auto rho = build_rho(kPower, 1, 64);
  EXPECT_THROW(family_upper_estimate(c, {}, 1, 2, rho), EmptySelectionError);
}

TEST(KappaEstimate, ConvergesFromBelowAsModelRefines) {
  for (const auto& g : {kPower, GaugeSpec::example37()}) {
    const auto rho = build_rho(g, 1, 1 << 18);
    double prev = 0.0;
    double prev_step = 1.0;
    for (int depth = 5; depth <= 9; ++depth) {
      const double k = kappa_estimate(g, 2, rho, depth, 1, 4).value;
      EXPECT_GE(k, prev);
      if (depth > 5) {
        EXPECT_LT(k - prev, prev_step);
        prev_step = k - prev;
      }
      prev = k;
    }
  }
}
