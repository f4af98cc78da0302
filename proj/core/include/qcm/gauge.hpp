#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcm {

/// Built-in gauge families.
///
///   power      f(x) = x^s                       on (0, inf)
///   example37  f(x) = x / log(e/x)              on (0, 1]
///   power_log  f(x) = x^s * log(e/x)^(-beta)    on (0, 1]
enum class GaugeFamily { power, example37, power_log };

std::string_view to_string(GaugeFamily family);
GaugeFamily parse_gauge_family(std::string_view name);

struct GaugeSpec {
  GaugeFamily family = GaugeFamily::power;
  /// Regular-variation index; fixed to 1 for example37.
  double s = 1.0;
  /// Log exponent, power_log only.
  double beta = 0.0;

  static GaugeSpec power(double s);
  static GaugeSpec example37();
  static GaugeSpec power_log(double s, double beta);

  friend bool operator==(const GaugeSpec&, const GaugeSpec&) = default;
};

/// Throws DomainError unless s >= 1 and beta >= 0.
void check_parameters(const GaugeSpec& g);

/// Right end of the domain: +inf for power, 1 otherwise.
double x_max(const GaugeSpec& g);

/// Index of regular variation at 0.
double variation_index(const GaugeSpec& g);

/// floor(s) + 1, the ambient dimension of the Cantor construction.
int default_dimension(const GaugeSpec& g);

double eval(const GaugeSpec& g, double x);

/// log f(x), evaluated in closed form so it stays accurate for tiny x.
double log_eval(const GaugeSpec& g, double x);

struct Derivatives {
  double first = 0.0;
  double second = 0.0;
};

Derivatives derivatives(const GaugeSpec& g, double x);

/// Compositional inverse: x in (0, x_max] with |f(x) - y| <= 1e-14 y.
double inverse(const GaugeSpec& g, double y);

/// h(x) = 1/f^{-1}(1/x) and its derivative
/// h'(x) = (f(t)/t)^2 / f'(t), t = f^{-1}(1/x).
struct HValue {
  double h = 0.0;
  double hprime = 0.0;
};

HValue h_and_hprime(const GaugeSpec& g, double x);

/// Principal branch of Lambert W on [0, inf).
double lambert_w(double x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CheckEntry {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  Interval grid;
  int grid_points = 0;
  std::vector<CheckEntry> checks;
  /// Largest grid point t with (log f)'' <= 0 on every grid point <= t; 0 if none.
  double verified_t0 = 0.0;

  const CheckEntry* find(std::string_view name) const;
  bool passed(std::string_view name) const;
  /// Convex, C^2 (closed form), and f'(0+) = 0.
  bool property_r() const;
  bool all_passed() const;
};

/// Sampled checks of the regularity conditions used by the construction.
/// Default interval is [1e-12, min(x_max, 1)].
ValidationReport validate_gauge(const GaugeSpec& g);
ValidationReport validate_gauge(const GaugeSpec& g, Interval t0_search);

struct RvDeviation {
  double a = 0.0;
  /// |f(a x)/f(x) - a^s|
  double ratio_deviation = 0.0;
  /// |f^{-1}(x)/f^{-1}(a x) - a^{-1/s}|
  double inverse_deviation = 0.0;
};

std::vector<RvDeviation> rv_index_check(const GaugeSpec& g,
                                        std::span<const double> a_list,
                                        double x_probe);

}  // namespace qcm
