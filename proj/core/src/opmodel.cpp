#include "qcm/opmodel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qcm/error.hpp"
#include "qcm/summation.hpp"

namespace qcm {

namespace {

constexpr double kRelativeCutoff = 1e-12;
constexpr std::size_t kBruteForceMaxCells = 4096;

void check_depth(const CantorComplex& c, int depth) {
  if (depth < 0 || depth > c.depth()) {
    throw DepthError("model depth " + std::to_string(depth) + " outside [0, " +
                     std::to_string(c.depth()) + "]");
  }
  if (c.dimension() * depth > kMaxCellBits) {
    throw SizeError("model with 2^" + std::to_string(c.dimension() * depth) +
                    " cells exceeds the 2^20 cap");
  }
}

void check_level(const FiniteModel& model, int level, int axis) {
  if (level < 0 || level > model.depth()) {
    throw DepthError("projection level " + std::to_string(level) + " outside [0, " +
                     std::to_string(model.depth()) + "]");
  }
  if (axis < 0 || axis >= model.dimension()) {
    throw DomainError("axis " + std::to_string(axis) + " outside [0, n)");
  }
}

// Anchor corner of the depth-M cell with the given rank, accumulated from
// generation `from`+1 down to `depth`.
void corner_from_rank(const CantorComplex& c, int depth, std::uint64_t rank, int from,
                      std::span<double> out) {
  const int n = c.dimension();
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  std::fill(out.begin(), out.end(), 0.0);
  for (int m = from + 1; m <= depth; ++m) {
    const auto letter = static_cast<std::uint32_t>(((rank >> (n * (depth - m))) & mask) + 1);
    const double step = c.offset(m);
    for (int axis = 0; axis < n; ++axis) {
      if (corner_bit(letter, n, axis) != 0) out[static_cast<std::size_t>(axis)] += step;
    }
  }
}

// Half-open rank range [lo, hi) of depth-M descendants of w.
std::pair<std::uint64_t, std::uint64_t> descendant_range(const Word& w, int n, int depth) {
  const int shift = n * (depth - static_cast<int>(w.size()));
  const std::uint64_t lo = w.rank() << shift;
  return {lo, lo + (std::uint64_t{1} << shift)};
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> selection_ranges(
    std::span<const Word> cells, int n, int depth) {
  if (cells.empty()) throw EmptySelectionError("cell selection is empty");
  const std::size_t length = cells.front().size();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  for (const auto& w : cells) {
    if (w.size() != length) throw DomainError("selected words must share one length");
    if (w.dimension() != n) throw DomainError("selected word has the wrong dimension");
    if (static_cast<int>(w.size()) > depth) {
      throw DepthError("selected word is longer than the model depth");
    }
    ranges.push_back(descendant_range(w, n, depth));
  }
  std::sort(ranges.begin(), ranges.end());
  ranges.erase(std::unique(ranges.begin(), ranges.end()), ranges.end());
  return ranges;
}

double population_std(std::span<const double> d) {
  CompensatedSum sum;
  for (double x : d) sum.add(x);
  const double mean = sum.value() / static_cast<double>(d.size());
  CompensatedSum sq;
  for (double x : d) sq.add((x - mean) * (x - mean));
  return std::sqrt(sq.value() / static_cast<double>(d.size()));
}

SingularSpectrum drop_small(std::vector<double> values) {
  SingularSpectrum sorted(std::move(values));
  const double cutoff = kRelativeCutoff * sorted.max();
  std::vector<double> kept;
  kept.reserve(sorted.size());
  for (double v : sorted.values()) {
    if (v > 0.0 && v >= cutoff) kept.push_back(v);
  }
  return SingularSpectrum(std::move(kept));
}

}  // namespace

Word FiniteModel::word(std::size_t i) const {
  return Word::from_rank(dimension(), depth_, ranks_.at(i));
}

FiniteModel build_model(const CantorComplex& c, int depth) {
  check_depth(c, depth);
  FiniteModel model(c);
  model.depth_ = depth;
  const int n = c.dimension();
  const std::uint64_t count = std::uint64_t{1} << (n * depth);
  model.weight_ = std::ldexp(1.0, -n * depth);
  model.ranks_.resize(count);
  model.coords_.resize(count * static_cast<std::size_t>(n));
  for (std::uint64_t r = 0; r < count; ++r) {
    model.ranks_[r] = r;
    corner_from_rank(c, depth, r, 0,
                     std::span<double>(model.coords_).subspan(r * static_cast<std::size_t>(n),
                                                              static_cast<std::size_t>(n)));
  }
  return model;
}

FiniteModel build_model(const CantorComplex& c, int depth, std::span<const Word> cells) {
  check_depth(c, depth);
  const int n = c.dimension();
  const auto ranges = selection_ranges(cells, n, depth);
  FiniteModel model(c);
  model.depth_ = depth;
  model.weight_ = std::ldexp(1.0, -n * depth);
  for (const auto& [lo, hi] : ranges) {
    for (std::uint64_t r = lo; r < hi; ++r) {
      model.ranks_.push_back(r);
      model.coords_.resize(model.coords_.size() + static_cast<std::size_t>(n));
      corner_from_rank(c, depth, r, 0,
                       std::span<double>(model.coords_).last(static_cast<std::size_t>(n)));
    }
  }
  return model;
}

FiniteModel restrict_model(const FiniteModel& model, std::span<const Word> cells) {
  const int n = model.dimension();
  const auto ranges = selection_ranges(cells, n, model.depth());
  FiniteModel out(model.complex());
  out.depth_ = model.depth();
  out.weight_ = model.weight();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto r = model.rank(i);
    const auto it = std::upper_bound(ranges.begin(), ranges.end(), std::make_pair(r, ~std::uint64_t{0}));
    if (it == ranges.begin() || r >= std::prev(it)->second) continue;
    out.ranks_.push_back(r);
    for (int axis = 0; axis < n; ++axis) out.coords_.push_back(model.coord(i, axis));
  }
  if (out.ranks_.empty()) throw EmptySelectionError("selection retains no cells of the model");
  return out;
}

SingularSpectrum commutator_spectrum_analytic(const FiniteModel& model, int level, int axis) {
  check_level(model, level, axis);
  const int n = model.dimension();
  const int shift = n * (model.depth() - level);
  const auto& c = model.complex();
  std::vector<double> values;
  std::vector<double> local;
  std::vector<double> corner(static_cast<std::size_t>(n));
  std::size_t begin = 0;
  while (begin < model.size()) {
    const std::uint64_t block = model.rank(begin) >> shift;
    std::size_t end = begin;
    local.clear();
    while (end < model.size() && (model.rank(end) >> shift) == block) {
      corner_from_rank(c, model.depth(), model.rank(end), level, corner);
      local.push_back(corner[static_cast<std::size_t>(axis)]);
      ++end;
    }
    const double sigma = population_std(local);
    if (sigma > 0.0) {
      values.push_back(sigma);
      values.push_back(sigma);
    }
    begin = end;
  }
  return drop_small(std::move(values));
}

SingularSpectrum commutator_spectrum_bruteforce(const FiniteModel& model, int level, int axis) {
  check_level(model, level, axis);
  const std::size_t size = model.size();
  if (size > kBruteForceMaxCells) {
    throw SizeError("brute-force SVD limited to 4096 cells, model has " + std::to_string(size));
  }
  const int shift = model.dimension() * (model.depth() - level);
  // Equal weights make the normalized indicators an orthonormal basis, in
  // which P_L is block averaging and T_axis is diagonal.
  Eigen::MatrixXd projection = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size),
                                                     static_cast<Eigen::Index>(size));
  std::size_t begin = 0;
  while (begin < size) {
    std::size_t end = begin;
    while (end < size && (model.rank(end) >> shift) == (model.rank(begin) >> shift)) ++end;
    const double inv = 1.0 / static_cast<double>(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = begin; j < end; ++j) {
        projection(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inv;
      }
    }
    begin = end;
  }
  Eigen::VectorXd diag(static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) diag(static_cast<Eigen::Index>(i)) = model.coord(i, axis);

  const Eigen::MatrixXd commutator =
      projection * diag.asDiagonal() - diag.asDiagonal() * projection;
  // The commutator is skew-symmetric, so its singular values are the moduli
  // of the eigenvalues of the Hermitian matrix i*C. BDCSVD splits the heavily
  // repeated values here.
  const Eigen::MatrixXcd hermitian = std::complex<double>(0.0, 1.0) * commutator.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian, Eigen::EigenvaluesOnly);
  std::vector<double> values;
  values.reserve(size);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) values.push_back(std::abs(eig.eigenvalues()(i)));
  return drop_small(std::move(values));
}

CommutatorReport commutator_norms(const FiniteModel& model, int level, const WeightSequence& pi) {
  CommutatorReport report;
  report.level = level;
  const int n = model.dimension();
  for (int axis = 0; axis < n; ++axis) {
    report.spectra.push_back(commutator_spectrum_analytic(model, level, axis));
    report.axis_norms.push_back(phi_norm(pi, report.spectra.back()));
    report.tuple_norm = std::max(report.tuple_norm, report.axis_norms.back());
    report.operator_norm = std::max(report.operator_norm, report.spectra.back().max());
  }
  const auto& c = model.complex();
  report.sup_norm_bound = 2.0 * cell_diameter(c, level);
  report.discretization_error = c.lambda(model.depth());
  return report;
}

SingularSpectrum ampliate_spectrum(const SingularSpectrum& xs, int m) {
  if (m < 1) throw DomainError("ampliation factor must be >= 1");
  std::vector<double> values;
  values.reserve(xs.size() * static_cast<std::size_t>(m));
  for (double v : xs.values()) values.insert(values.end(), static_cast<std::size_t>(m), v);
  return SingularSpectrum(std::move(values));
}

}  // namespace qcm
