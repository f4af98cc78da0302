#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcm/gauge.hpp"
#include "qcm/spectrum.hpp"

namespace qcm {

enum class WeightGenerator { rho_of_gauge, harmonic, custom };

/// Finite prefix (pi_N, pi_{N+1}, ...) of a nonincreasing weight sequence.
/// Norms always use positions: values()[0] multiplies the largest singular
/// value whatever start_index() is.
class WeightSequence {
 public:
  /// Throws MonotonicityError if values increase anywhere, DomainError if a
  /// value is negative or the first value is not positive.
  WeightSequence(std::vector<double> values, std::int64_t start_index = 1,
                 WeightGenerator generator = WeightGenerator::custom,
                 std::optional<GaugeSpec> gauge = std::nullopt);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t position) const { return values_[position]; }
  std::int64_t start_index() const noexcept { return start_index_; }
  /// Absolute index of the last stored weight.
  std::int64_t last_index() const noexcept {
    return start_index_ + static_cast<std::int64_t>(values_.size()) - 1;
  }
  /// Weight with absolute index k.
  double at_index(std::int64_t k) const;
  WeightGenerator generator() const noexcept { return generator_; }
  const std::optional<GaugeSpec>& gauge() const noexcept { return gauge_; }

  /// True when the generator is known in closed form to have a divergent sum.
  bool known_divergent() const noexcept { return generator_ != WeightGenerator::custom; }

  /// Partial sums S_j = sum of the first j weights, j = 0..size().
  std::vector<double> partial_sums() const;

 private:
  std::vector<double> values_;
  std::int64_t start_index_;
  WeightGenerator generator_;
  std::optional<GaugeSpec> gauge_;
};

/// rho_k = h'(k), k = N .. N+count-1. Throws MonotonicityError if h' increases
/// anywhere on that range.
WeightSequence build_rho(const GaugeSpec& g, std::int64_t start_index, std::size_t count);

/// pi_k = 1/k, k = N .. N+count-1.
WeightSequence harmonic_weights(std::size_t count, std::int64_t start_index = 1);

/// Smallest N <= k_horizon such that h' is nonincreasing on [N, k_horizon] and
/// |f^{-1}(1/k)/f^{-1}(1/(m k)) - m^{1/s}| < epsilon for every sampled k in
/// [N, k_horizon] and every m <= m_max. Sampling: every integer up to 64, then
/// 32 points per decade. Throws NotFoundError when no sample qualifies.
std::int64_t choose_start_index(const GaugeSpec& g, double epsilon, int m_max,
                                std::int64_t k_horizon);

/// Sampling grid used by choose_start_index.
std::vector<std::int64_t> start_index_grid(std::int64_t lo, std::int64_t hi);

/// Phi_pi(xs) = sum_k pi_k xs*_k where xs* is the nonincreasing rearrangement
/// of |xs|. Throws InsufficientWeightsError if xs has more nonzero entries than
/// there are weights.
double phi_norm(const WeightSequence& pi, std::span<const double> xs);
double phi_norm(const WeightSequence& pi, const SingularSpectrum& xs);

/// max over m <= m_max of (sum_{k<=m} pi_k) / (m pi_m), positions from 1.
double regularity_alpha(const WeightSequence& pi, std::size_t m_max);

/// Left shift applied `times` times.
WeightSequence shift(const WeightSequence& pi, std::size_t times);

/// m pi_m f^{-1}(1/m) for absolute index m.
double window_value(const GaugeSpec& g, const WeightSequence& pi, std::int64_t m);

struct WindowSummary {
  double inf = 0.0;
  double sup = 0.0;
  std::int64_t argmin = 0;
  std::int64_t argmax = 0;
  double first = 0.0;
  double last = 0.0;
  std::int64_t count = 0;
};

/// Extremes of m pi_m f^{-1}(1/m) over every integer m in [m_lo, m_hi].
WindowSummary obstruction_window(const GaugeSpec& g, const WeightSequence& pi,
                                 std::int64_t m_lo, std::int64_t m_hi);

/// f^{-1}(1/m^n) * sum_{k <= m^n} pi_k for each m (positions from 1).
std::vector<double> vanishing_sequence(const GaugeSpec& g, const WeightSequence& pi, int n,
                                       std::span<const std::int64_t> ms);

}  // namespace qcm
