#pragma once

#include <span>
#include <vector>

namespace qcm {

/// Singular values of a finite-rank operator, sorted nonincreasing.
class SingularSpectrum {
 public:
  SingularSpectrum() = default;
  /// Sorts (stable, descending). Throws DomainError on negative or NaN input.
  explicit SingularSpectrum(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  /// Largest value (operator norm); 0 for an empty spectrum.
  double max() const noexcept { return values_.empty() ? 0.0 : values_.front(); }

  friend bool operator==(const SingularSpectrum&, const SingularSpectrum&) = default;

 private:
  std::vector<double> values_;
};

/// Merges spectra and re-sorts; the result does not depend on input order.
SingularSpectrum merge(std::span<const SingularSpectrum> parts);

}  // namespace qcm
