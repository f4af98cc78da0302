#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "qcm/error.hpp"
#include "qcm/fractal.hpp"
#include "qcm/io.hpp"

using namespace qcm;

namespace {

std::vector<std::uint32_t> letters_of(const Word& w) {
  return {w.letters().begin(), w.letters().end()};
}

// Interior intersection of two axis-aligned cubes.
bool overlap(const CellBox& a, const CellBox& b) {
  for (std::size_t i = 0; i < a.corner.size(); ++i) {
    if (a.corner[i] + a.side <= b.corner[i] || b.corner[i] + b.side <= a.corner[i]) return false;
  }
  return true;
}

}  // namespace

TEST(BuildComplex, PowerThreeHalves) {
  const auto c = build_complex(GaugeSpec::power(1.5), 2);
  EXPECT_EQ(c.dimension(), 2);
  EXPECT_NEAR(c.lambda(1), std::pow(2.0, -4.0 / 3.0), 1e-15);
  EXPECT_NEAR(c.lambda(2), std::pow(2.0, -8.0 / 3.0), 1e-15);
  EXPECT_NEAR(c.lambda(1), 0.39685026299204984, 1e-15);
  EXPECT_NEAR(c.eta(1), 1.0 - std::pow(2.0, -1.0 / 3.0), 1e-15);
}

TEST(BuildComplex, QuarterCantorSquare) {
  const auto c = build_complex(GaugeSpec::power(1.0), 1);
  EXPECT_EQ(c.dimension(), 2);
  EXPECT_DOUBLE_EQ(c.lambda(1), 0.25);
  EXPECT_DOUBLE_EQ(c.eta(1), 0.5);
}

TEST(BuildComplex, PowerThreeUsesFourDimensions) {
  const auto c = build_complex(GaugeSpec::power(3.0), 1);
  EXPECT_EQ(c.dimension(), 4);
  EXPECT_NEAR(c.lambda(1), std::pow(2.0, -4.0 / 3.0), 1e-15);
}

TEST(BuildComplex, Example37Lambdas) {
  // mpmath roots of x/log(e/x) = 4^{-m}
  const std::vector<double> expected = {1.0, 0.44976018829297315, 0.17237880450212116,
                                        0.059671, 0.019322, 0.0059765, 0.0017886, 0.00052229};
  const auto c = build_complex(GaugeSpec::example37(), 7);
  for (int m = 0; m <= 7; ++m) {
    EXPECT_LT(std::abs(c.lambda(m) - expected[static_cast<std::size_t>(m)]) / expected[static_cast<std::size_t>(m)],
              m <= 2 ? 1e-13 : 1e-4)
        << m;
  }
}

TEST(BuildComplex, Errors) {
  EXPECT_THROW(build_complex(GaugeSpec::power(1.5), 11), SizeError);
  EXPECT_THROW(build_complex(GaugeSpec::power(1.5), 0), DepthError);
  // n = 1 with s = 1.5 leaves no room for a gap: lambda_1 = 2^{-2/3} > 1/2.
  EXPECT_THROW(build_complex(GaugeSpec::power(1.5), 2, 1), InfeasibleError);
}

TEST(BuildComplex, PowerLambdasExact) {
  for (double s : {1.0, 1.5, 2.0, 2.5}) {
    const auto g = GaugeSpec::power(s);
    const auto c = build_complex(g, 20 / default_dimension(g));
    for (int m = 1; m <= c.depth(); ++m) {
      const double exact = std::pow(2.0, -c.dimension() * m / s);
      EXPECT_LE(std::abs(c.lambda(m) - exact), 4e-16 * exact) << s << " " << m;
    }
  }
}

TEST(Words, Enumerate) {
  const auto c = build_complex(GaugeSpec::power(1.0), 3);
  const auto l1 = enumerate_words(c, 1);
  ASSERT_EQ(l1.size(), 4U);
  for (std::uint32_t k = 0; k < 4; ++k) EXPECT_EQ(letters_of(l1[k]), std::vector<std::uint32_t>{k + 1});
  const auto l2 = enumerate_words(c, 2);
  ASSERT_EQ(l2.size(), 16U);
  EXPECT_EQ(letters_of(l2.front()), (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(letters_of(l2.back()), (std::vector<std::uint32_t>{4, 4}));
  const auto l0 = enumerate_words(c, 0);
  ASSERT_EQ(l0.size(), 1U);
  EXPECT_TRUE(l0.front().empty());
}

TEST(Words, RankRoundTripAndValidation) {
  auto rng = gen::make_rng(3);
  for (int t = 0; t < gen::kTrials; ++t) {
    const int n = gen::uniform_int(rng, 1, 4);
    const int len = gen::uniform_int(rng, 0, 20 / n);
    const std::uint64_t count = std::uint64_t{1} << (n * len);
    const std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, count - 1)(rng);
    const auto w = Word::from_rank(n, len, r);
    EXPECT_EQ(w.rank(), r);
    EXPECT_EQ(static_cast<int>(w.size()), len);
  }
  EXPECT_THROW(Word(2, {5}), DomainError);
  EXPECT_THROW(Word(2, {0}), DomainError);
  EXPECT_TRUE(Word(2, {1}).is_prefix_of(Word(2, {1, 3})));
  EXPECT_FALSE(Word(2, {2}).is_prefix_of(Word(2, {1, 3})));
  EXPECT_EQ(Word(2, {1}).child(3), Word(2, {1, 3}));
}

TEST(CellGeometry, Corners) {
  const auto c = build_complex(GaugeSpec::power(1.5), 2);
  const auto a = cell_geometry(c, Word(2, {1}));
  EXPECT_EQ(a.corner, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(a.side, c.lambda(1));
  const auto b = cell_geometry(c, Word(2, {4}));
  EXPECT_DOUBLE_EQ(b.corner[0], 1.0 - c.lambda(1));
  EXPECT_DOUBLE_EQ(b.corner[1], 1.0 - c.lambda(1));

  const auto q = build_complex(GaugeSpec::power(1.0), 2);
  const auto d = cell_geometry(q, Word(2, {1, 4}));
  EXPECT_DOUBLE_EQ(d.corner[0], 0.1875);
  EXPECT_DOUBLE_EQ(d.corner[1], 0.1875);
  EXPECT_DOUBLE_EQ(d.side, 0.0625);
}

TEST(CellGeometry, AxisOneIsMostSignificant) {
  const auto c = build_complex(GaugeSpec::power(1.0), 1);
  const auto b = cell_geometry(c, Word(2, {2}));
  EXPECT_EQ(b.corner, (std::vector<double>{0.0, 0.75}));
  const auto d = cell_geometry(c, Word(2, {3}));
  EXPECT_EQ(d.corner, (std::vector<double>{0.75, 0.0}));
}

TEST(CellMeasure, Examples) {
  const auto c = build_complex(GaugeSpec::power(1.5), 3);
  EXPECT_EQ(cell_measure(c, Word(2, {3})), 0.25);
  EXPECT_EQ(cell_measure(c, Word(2, {3, 1, 2})), 1.0 / 64);
  EXPECT_EQ(cell_measure(c, Word(2)), 1.0);
}

TEST(CellProperties, PartitionAndNesting) {
  for (const auto& g : {GaugeSpec::power(1.0), GaugeSpec::power(1.5), GaugeSpec::example37()}) {
    const auto c = build_complex(g, 4);
    for (int level = 1; level <= 4; ++level) {
      const auto words = enumerate_words(c, level);
      double total = 0.0;
      std::vector<CellBox> boxes;
      for (const auto& w : words) {
        total += cell_measure(c, w);
        boxes.push_back(cell_geometry(c, w));
      }
      EXPECT_EQ(total, 1.0);
      if (level <= 3) {
        for (std::size_t i = 0; i < boxes.size(); ++i) {
          for (std::size_t j = i + 1; j < boxes.size(); ++j) {
            EXPECT_FALSE(overlap(boxes[i], boxes[j])) << level << " " << i << " " << j;
          }
        }
      }
      if (level < 4) {
        for (const auto& w : words) {
          const auto parent = cell_geometry(c, w);
          for (std::uint32_t k = 1; k <= 4; ++k) {
            const auto child = cell_geometry(c, w.child(k));
            for (std::size_t a = 0; a < 2; ++a) {
              EXPECT_GE(child.corner[a], parent.corner[a]);
              EXPECT_LE(child.corner[a] + child.side, parent.corner[a] + parent.side + 1e-15);
            }
          }
        }
      }
    }
  }
}

TEST(CellProperties, DiameterIsSideTimesRootN) {
  const auto c = build_complex(GaugeSpec::power(3.0), 2);
  EXPECT_DOUBLE_EQ(cell_diameter(c, 2), c.lambda(2) * 2.0);
}

TEST(HausdorffCover, Examples) {
  const auto q = build_complex(GaugeSpec::power(1.0), 3);
  const double r = 0.25 * std::sqrt(2.0) / 2.0;
  EXPECT_NEAR(hausdorff_cover_estimate(q, Word(2), 1), 4.0 * r, 1e-15);
  // f(x) = x for s = 1: 4 f(r) = sqrt(2)/2
  EXPECT_NEAR(hausdorff_cover_estimate(q, Word(2), 1), std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(hausdorff_cover_estimate(q, Word(2), 0), std::sqrt(2.0) / 2.0, 1e-15);

  const auto c = build_complex(GaugeSpec::power(1.5), 6);
  const double constant = std::pow(std::sqrt(2.0) / 2.0, 1.5);
  for (int d = 0; d <= 6; ++d) {
    EXPECT_NEAR(hausdorff_cover_estimate(c, Word(2), d), constant, 1e-14) << d;
  }
}

TEST(HausdorffCover, BoundedRelativeToMeasure) {
  const auto c = build_complex(GaugeSpec::example37(), 8);
  auto rng = gen::make_rng(5);
  double worst = 0.0;
  for (int len = 0; len <= 4; ++len) {
    for (int d = 0; d <= 4; ++d) {
      const auto w = Word::from_rank(2, len, len == 0 ? 0 : rng() % (std::uint64_t{1} << (2 * len)));
      worst = std::max(worst, hausdorff_cover_estimate(c, w, d) / cell_measure(c, w));
    }
  }
  EXPECT_LT(worst, 2.0);
}

TEST(Geometry, ExportAndRoundTrip) {
  const auto c = build_complex(GaugeSpec::example37(), 3);
  EXPECT_EQ(export_geometry(c, 1).records.size(), 4U);
  const auto doc = export_geometry(c, 3);
  EXPECT_EQ(doc.records.size(), 64U);
  double total = 0.0;
  for (const auto& r : doc.records) total += r.measure;
  EXPECT_EQ(total, 1.0);
  const auto text = serialize_geometry(doc);
  EXPECT_EQ(parse_geometry(text), doc);
  EXPECT_EQ(serialize_geometry(parse_geometry(text)), text);
}

TEST(Geometry, MalformedDocumentsRejected) {
  EXPECT_THROW(parse_geometry("{"), DomainError);
  EXPECT_THROW(parse_geometry(R"({"format_version": 1, "dimension": 2, "level": 1})"), DomainError);
  EXPECT_THROW(
      parse_geometry(
          R"({"format_version": 1, "dimension": 2, "level": 1, "records": [{"word": [9], "corner": [0, 0], "side": 1, "measure": 1}]})"),
      DomainError);
}
