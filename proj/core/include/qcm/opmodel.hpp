#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qcm/fractal.hpp"
#include "qcm/seqnorm.hpp"
#include "qcm/spectrum.hpp"

namespace qcm {

/// Depth-M step-function model of the multiplication n-tuple on L^2(C_f, H_f).
/// Each retained depth-M cell carries its anchor corner and the weight
/// 2^{-nM}; cells are kept in lexicographic order of their words. Axes are
/// 0-based throughout the C++ API.
class FiniteModel {
 public:
  const CantorComplex& complex() const noexcept { return complex_; }
  int depth() const noexcept { return depth_; }
  int dimension() const noexcept { return complex_.dimension(); }
  std::size_t size() const noexcept { return ranks_.size(); }
  double weight() const noexcept { return weight_; }

  /// Lexicographic rank of the i-th retained cell among all depth-M words.
  std::uint64_t rank(std::size_t i) const { return ranks_[i]; }
  std::span<const std::uint64_t> ranks() const noexcept { return ranks_; }
  Word word(std::size_t i) const;
  double coord(std::size_t i, int axis) const {
    return coords_[i * static_cast<std::size_t>(dimension()) + static_cast<std::size_t>(axis)];
  }
  /// Total retained measure (1 for the full model).
  double measure() const noexcept { return weight_ * static_cast<double>(ranks_.size()); }

 private:
  friend FiniteModel build_model(const CantorComplex&, int);
  friend FiniteModel build_model(const CantorComplex&, int, std::span<const Word>);
  friend FiniteModel restrict_model(const FiniteModel&, std::span<const Word>);
  explicit FiniteModel(CantorComplex c) : complex_(std::move(c)) {}

  CantorComplex complex_;
  int depth_ = 0;
  double weight_ = 1.0;
  std::vector<std::uint64_t> ranks_;
  std::vector<double> coords_;
};

/// All 2^{nM} cells of depth M.
FiniteModel build_model(const CantorComplex& c, int depth);

/// Depth-M cells descending from `cells` (words of equal length <= M), built
/// without materializing the full model. Same result as
/// restrict_model(build_model(c, M), cells).
FiniteModel build_model(const CantorComplex& c, int depth, std::span<const Word> cells);

/// Sub-model of the depth-M cells descending from `cells`. Weights are kept,
/// so the result is a sub-probability model.
FiniteModel restrict_model(const FiniteModel& model, std::span<const Word> cells);

/// Spectrum of [P_L, T_axis] from the block formula: for each depth-L block of
/// K fine cells with axis coordinates d, a pair of singular values equal to the
/// population standard deviation of d. Values below 1e-12 * max are dropped.
/// Blocks use coordinates relative to their own anchor, so congruent blocks give
/// bit-identical values.
SingularSpectrum commutator_spectrum_analytic(const FiniteModel& model, int level, int axis);

/// Dense oracle: assembles P_L and diag(coords) and takes a full SVD.
/// Throws SizeError above 4096 cells.
SingularSpectrum commutator_spectrum_bruteforce(const FiniteModel& model, int level, int axis);

struct CommutatorReport {
  int level = 0;
  std::vector<SingularSpectrum> spectra;  // one per axis
  std::vector<double> axis_norms;         // Phi_pi of each spectrum
  double tuple_norm = 0.0;                // max over axes
  double operator_norm = 0.0;             // max singular value over axes
  double sup_norm_bound = 0.0;            // 2 lambda_L sqrt(n)
  double discretization_error = 0.0;      // lambda_M per axis
};

CommutatorReport commutator_norms(const FiniteModel& model, int level, const WeightSequence& pi);

/// Singular values of X (x) I_m: every value repeated m times.
SingularSpectrum ampliate_spectrum(const SingularSpectrum& xs, int m);

}  // namespace qcm
