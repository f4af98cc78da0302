#include "qcm/seqnorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qcm/error.hpp"
#include "qcm/summation.hpp"

namespace qcm {

namespace {

double weighted_sum_sorted(const WeightSequence& pi, std::span<const double> sorted) {
  std::size_t nonzero = sorted.size();
  while (nonzero > 0 && sorted[nonzero - 1] == 0.0) --nonzero;
  if (nonzero > pi.size()) {
    throw InsufficientWeightsError("weight sequence has " + std::to_string(pi.size()) +
                                   " entries, spectrum needs " + std::to_string(nonzero));
  }
  CompensatedSum sum;
  for (std::size_t k = 0; k < nonzero; ++k) sum.add(pi[k] * sorted[k]);
  return sum.value();
}

}  // namespace

WeightSequence::WeightSequence(std::vector<double> values, std::int64_t start_index,
                               WeightGenerator generator, std::optional<GaugeSpec> gauge)
    : values_(std::move(values)),
      start_index_(start_index),
      generator_(generator),
      gauge_(std::move(gauge)) {
  if (start_index_ < 1) throw DomainError("weight start index must be >= 1");
  if (values_.empty()) throw LengthError("weight sequence must not be empty");
  if (!(values_.front() > 0.0)) throw DomainError("first weight must be positive");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw DomainError("weights must be finite and nonnegative");
    }
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw MonotonicityError("weights increase at index " +
                              std::to_string(start_index_ + static_cast<std::int64_t>(i)));
    }
  }
}

double WeightSequence::at_index(std::int64_t k) const {
  if (k < start_index_ || k > last_index()) {
    throw LengthError("weight index " + std::to_string(k) + " outside [" +
                      std::to_string(start_index_) + ", " + std::to_string(last_index()) + "]");
  }
  return values_[static_cast<std::size_t>(k - start_index_)];
}

std::vector<double> WeightSequence::partial_sums() const {
  std::vector<double> out(values_.size() + 1, 0.0);
  CompensatedSum sum;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    sum.add(values_[i]);
    out[i + 1] = sum.value();
  }
  return out;
}

WeightSequence build_rho(const GaugeSpec& g, std::int64_t start_index, std::size_t count) {
  if (start_index < 1) throw DomainError("rho start index must be >= 1");
  if (count == 0) throw LengthError("rho needs at least one weight");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = h_and_hprime(g, static_cast<double>(start_index + static_cast<std::int64_t>(i))).hprime;
    if (i > 0 && values[i] > values[i - 1]) {
      throw MonotonicityError("h' increases at k=" +
                              std::to_string(start_index + static_cast<std::int64_t>(i)) +
                              "; choose a larger start index");
    }
  }
  return WeightSequence(std::move(values), start_index, WeightGenerator::rho_of_gauge, g);
}

WeightSequence harmonic_weights(std::size_t count, std::int64_t start_index) {
  if (count == 0) throw LengthError("harmonic weights need at least one entry");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = 1.0 / static_cast<double>(start_index + static_cast<std::int64_t>(i));
  }
  return WeightSequence(std::move(values), start_index, WeightGenerator::harmonic);
}

std::vector<std::int64_t> start_index_grid(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> grid;
  if (hi < lo) return grid;
  for (std::int64_t k = lo; k <= std::min<std::int64_t>(hi, 64); ++k) grid.push_back(k);
  if (hi > 64) {
    const double llo = std::log10(static_cast<double>(std::max<std::int64_t>(lo, 64)));
    const double lhi = std::log10(static_cast<double>(hi));
    const int steps = std::max(1, static_cast<int>(std::ceil((lhi - llo) * 32.0)));
    for (int i = 1; i <= steps; ++i) {
      const auto k = static_cast<std::int64_t>(std::llround(std::pow(10.0, llo + (lhi - llo) * i / steps)));
      if (k > grid.back() && k <= hi) grid.push_back(k);
    }
    if (grid.back() != hi) grid.push_back(hi);
  }
  return grid;
}

std::int64_t choose_start_index(const GaugeSpec& g, double epsilon, int m_max,
                                std::int64_t k_horizon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (m_max < 1) throw DomainError("m_max must be >= 1");
  if (k_horizon < 1) throw DomainError("k_horizon must be >= 1");
  const double s = variation_index(g);
  const auto grid = start_index_grid(1, k_horizon);

  std::vector<double> hprime(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    hprime[i] = h_and_hprime(g, static_cast<double>(grid[i])).hprime;
  }
  auto qualifies = [&](std::size_t i) {
    if (i + 1 < grid.size() && hprime[i + 1] > hprime[i]) return false;
    const double k = static_cast<double>(grid[i]);
    const double base = inverse(g, 1.0 / k);
    for (int m = 1; m <= m_max; ++m) {
      const double ratio = base / inverse(g, 1.0 / (m * k));
      if (!(std::abs(ratio - std::pow(static_cast<double>(m), 1.0 / s)) < epsilon)) return false;
    }
    return true;
  };

  std::size_t first_good = grid.size();
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (!qualifies(i)) break;
    first_good = i;
  }
  if (first_good == grid.size()) {
    throw NotFoundError("no start index N <= " + std::to_string(k_horizon) +
                        " meets epsilon for m <= " + std::to_string(m_max));
  }
  return grid[first_good];
}

double phi_norm(const WeightSequence& pi, std::span<const double> xs) {
  std::vector<double> sorted(xs.size());
  std::transform(xs.begin(), xs.end(), sorted.begin(), [](double x) { return std::abs(x); });
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>{});
  return weighted_sum_sorted(pi, sorted);
}

double phi_norm(const WeightSequence& pi, const SingularSpectrum& xs) {
  return weighted_sum_sorted(pi, xs.values());
}

double regularity_alpha(const WeightSequence& pi, std::size_t m_max) {
  if (m_max < 1 || m_max > pi.size()) {
    throw LengthError("regularity_alpha: m_max must be in [1, |pi|]");
  }
  double alpha = 0.0;
  CompensatedSum sum;
  for (std::size_t m = 1; m <= m_max; ++m) {
    sum.add(pi[m - 1]);
    const double denom = static_cast<double>(m) * pi[m - 1];
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    alpha = std::max(alpha, sum.value() / denom);
  }
  return alpha;
}

WeightSequence shift(const WeightSequence& pi, std::size_t times) {
  if (times >= pi.size()) {
    throw LengthError("cannot shift a weight sequence of length " + std::to_string(pi.size()) +
                      " by " + std::to_string(times));
  }
  std::vector<double> values(pi.values().begin() + static_cast<std::ptrdiff_t>(times),
                             pi.values().end());
  return WeightSequence(std::move(values), pi.start_index() + static_cast<std::int64_t>(times),
                        pi.generator(), pi.gauge());
}

double window_value(const GaugeSpec& g, const WeightSequence& pi, std::int64_t m) {
  return static_cast<double>(m) * pi.at_index(m) * inverse(g, 1.0 / static_cast<double>(m));
}

WindowSummary obstruction_window(const GaugeSpec& g, const WeightSequence& pi,
                                 std::int64_t m_lo, std::int64_t m_hi) {
  if (m_lo > m_hi || m_lo < pi.start_index() || m_hi > pi.last_index()) {
    throw LengthError("obstruction window range outside the weight horizon");
  }
  WindowSummary w;
  w.inf = std::numeric_limits<double>::infinity();
  w.sup = -std::numeric_limits<double>::infinity();
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double v = window_value(g, pi, m);
    if (v < w.inf) {
      w.inf = v;
      w.argmin = m;
    }
    if (v > w.sup) {
      w.sup = v;
      w.argmax = m;
    }
    if (m == m_lo) w.first = v;
    w.last = v;
  }
  w.count = m_hi - m_lo + 1;
  return w;
}

std::vector<double> vanishing_sequence(const GaugeSpec& g, const WeightSequence& pi, int n,
                                       std::span<const std::int64_t> ms) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  const auto sums = pi.partial_sums();
  std::vector<double> out;
  out.reserve(ms.size());
  for (auto m : ms) {
    if (m < 1) throw DomainError("vanishing_sequence: m must be >= 1");
    const double count = std::pow(static_cast<double>(m), n);
    if (count > static_cast<double>(pi.size())) {
      throw InsufficientWeightsError("vanishing_sequence needs " +
                                     std::to_string(static_cast<long long>(count)) +
                                     " weights, have " + std::to_string(pi.size()));
    }
    out.push_back(inverse(g, 1.0 / count) * sums[static_cast<std::size_t>(count)]);
  }
  return out;
}

}  // namespace qcm
