#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcm/gauge.hpp"

namespace qcm {

/// Maximum number of cells at the deepest generation (2^{n M} <= 2^20).
inline constexpr int kMaxCellBits = 20;

/// Index of a generation cell C_f^w: a word over {1, ..., 2^n}. Letter k
/// selects the k-th corner of the parent cell in lexicographic order of
/// {0,1}^n, with axis 1 as the most significant bit.
class Word {
 public:
  explicit Word(int dimension, std::vector<std::uint32_t> letters = {});

  /// The word of length `length` whose lexicographic rank is `rank`.
  static Word from_rank(int dimension, int length, std::uint64_t rank);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const std::uint32_t> letters() const noexcept { return letters_; }
  std::uint32_t operator[](std::size_t i) const { return letters_[i]; }

  /// Lexicographic rank among words of the same length.
  std::uint64_t rank() const noexcept;

  Word child(std::uint32_t letter) const;
  bool is_prefix_of(const Word& other) const noexcept;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  int dimension_;
  std::vector<std::uint32_t> letters_;
};

/// Bit of `letter` that selects the far corner along `axis` (0-based).
inline int corner_bit(std::uint32_t letter, int dimension, int axis) {
  return static_cast<int>(((letter - 1) >> (dimension - 1 - axis)) & 1U);
}

/// Symmetric generalized Cantor set C_f in R^n up to a finite generation.
/// Immutable after construction.
class CantorComplex {
 public:
  const GaugeSpec& gauge() const noexcept { return gauge_; }
  double s() const noexcept { return s_; }
  int dimension() const noexcept { return dimension_; }
  int depth() const noexcept { return static_cast<int>(lambda_.size()) - 1; }

  /// Side length lambda_m = f^{-1}(2^{-n m}); lambda_0 = 1.
  double lambda(int m) const;
  /// Removed gap eta_m = lambda_{m-1} - 2 lambda_m, m >= 1.
  double eta(int m) const;
  /// Offset of the far child along an axis at generation m: lambda_{m-1} - lambda_m.
  double offset(int m) const;

  std::span<const double> lambdas() const noexcept { return lambda_; }

 private:
  friend CantorComplex build_complex(const GaugeSpec&, int, std::optional<int>);
  CantorComplex() = default;

  GaugeSpec gauge_;
  double s_ = 1.0;
  int dimension_ = 1;
  std::vector<double> lambda_;
  std::vector<double> offset_;
};

/// Tabulates lambda_m, m <= depth. n defaults to floor(s)+1.
/// Throws InfeasibleError when lambda_{m-1} <= 2 lambda_m, SizeError when
/// 2^{n depth} exceeds 2^20.
CantorComplex build_complex(const GaugeSpec& g, int depth,
                            std::optional<int> n_override = std::nullopt);

/// All 2^{nL} words of length L in lexicographic order.
std::vector<Word> enumerate_words(const CantorComplex& c, int length);

struct CellBox {
  std::vector<double> corner;
  double side = 0.0;
};

/// Anchor corner and side of C_f^w; the cell lies in [corner, corner + side]^n.
CellBox cell_geometry(const CantorComplex& c, const Word& w);

/// Normalized measure 2^{-n|w|}, with H_f(C_f) = 1.
double cell_measure(const CantorComplex& c, const Word& w);

/// Sum of f(r) over one ball per depth-(|w|+d) subcell of C_f^w,
/// r = lambda_{|w|+d} sqrt(n) / 2.
double hausdorff_cover_estimate(const CantorComplex& c, const Word& w, int extra_depth);

/// Diameter of a cell of generation |w|: lambda_{|w|} sqrt(n).
double cell_diameter(const CantorComplex& c, int generation);

struct GeometryRecord {
  Word word;
  std::vector<double> corner;
  double side = 0.0;
  double measure = 0.0;

  friend bool operator==(const GeometryRecord&, const GeometryRecord&) = default;
};

struct GeometryDocument {
  int dimension = 1;
  int level = 0;
  std::vector<GeometryRecord> records;

  friend bool operator==(const GeometryDocument&, const GeometryDocument&) = default;
};

GeometryDocument export_geometry(const CantorComplex& c, int level);

}  // namespace qcm
