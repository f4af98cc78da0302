#include "qcm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qcm/error.hpp"

namespace qcm {

SingularSpectrum::SingularSpectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0)) throw DomainError("singular values must be nonnegative");
  }
  std::stable_sort(values_.begin(), values_.end(), std::greater<>{});
}

SingularSpectrum merge(std::span<const SingularSpectrum> parts) {
  std::vector<double> all;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  all.reserve(total);
  for (const auto& p : parts) all.insert(all.end(), p.values().begin(), p.values().end());
  return SingularSpectrum(std::move(all));
}

}  // namespace qcm
