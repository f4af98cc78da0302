#include "qcm/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qcm/error.hpp"

namespace qcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInverseTolerance = 1e-14;
constexpr double kInverseAcceptTolerance = 1e-12;
constexpr int kInverseMaxIterations = 200;
constexpr int kLambertMaxIterations = 50;

std::string format_value(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_argument(const GaugeSpec& g, double x) {
  if (!(x > 0.0) || x > x_max(g) || std::isnan(x)) {
    throw DomainError("gauge " + std::string(to_string(g.family)) +
                      ": argument " + format_value(x) +
                      " outside (0, x_max]");
  }
}

// u = log(e/x) = 1 - log x >= 1 on (0, 1].
double log_term(double x) { return 1.0 - std::log(x); }

// Elasticity x f'(x) / f(x); positive everywhere on the domain.
double elasticity(const GaugeSpec& g, double x) {
  switch (g.family) {
    case GaugeFamily::power:
      return g.s;
    case GaugeFamily::example37:
      return 1.0 + 1.0 / log_term(x);
    case GaugeFamily::power_log:
      return g.s + g.beta / log_term(x);
  }
  return g.s;
}

}  // namespace

std::string_view to_string(GaugeFamily family) {
  switch (family) {
    case GaugeFamily::power:
      return "power";
    case GaugeFamily::example37:
      return "example37";
    case GaugeFamily::power_log:
      return "power_log";
  }
  return "unknown";
}

GaugeFamily parse_gauge_family(std::string_view name) {
  if (name == "power") return GaugeFamily::power;
  if (name == "example37") return GaugeFamily::example37;
  if (name == "power_log") return GaugeFamily::power_log;
  throw DomainError("unknown gauge family '" + std::string(name) +
                    "' (expected power, example37, power_log)");
}

GaugeSpec GaugeSpec::power(double s) {
  GaugeSpec g{GaugeFamily::power, s, 0.0};
  check_parameters(g);
  return g;
}

GaugeSpec GaugeSpec::example37() { return GaugeSpec{GaugeFamily::example37, 1.0, 0.0}; }

GaugeSpec GaugeSpec::power_log(double s, double beta) {
  GaugeSpec g{GaugeFamily::power_log, s, beta};
  check_parameters(g);
  return g;
}

void check_parameters(const GaugeSpec& g) {
  if (g.family == GaugeFamily::example37) {
    if (g.s != 1.0 || g.beta != 0.0) {
      throw DomainError("example37 has fixed parameters s=1, beta=0");
    }
    return;
  }
  if (!(g.s >= 1.0) || !std::isfinite(g.s)) {
    throw DomainError("gauge index s must be finite and >= 1, got " + format_value(g.s));
  }
  if (!(g.beta >= 0.0) || !std::isfinite(g.beta)) {
    throw DomainError("gauge log exponent beta must be finite and >= 0, got " +
                      format_value(g.beta));
  }
  if (g.family == GaugeFamily::power && g.beta != 0.0) {
    throw DomainError("power gauge takes no beta");
  }
}

double x_max(const GaugeSpec& g) { return g.family == GaugeFamily::power ? kInf : 1.0; }

double variation_index(const GaugeSpec& g) {
  return g.family == GaugeFamily::example37 ? 1.0 : g.s;
}

int default_dimension(const GaugeSpec& g) {
  return static_cast<int>(std::floor(variation_index(g))) + 1;
}

double eval(const GaugeSpec& g, double x) {
  check_argument(g, x);
  switch (g.family) {
    case GaugeFamily::power:
      return std::pow(x, g.s);
    case GaugeFamily::example37:
      return x / log_term(x);
    case GaugeFamily::power_log:
      return std::pow(x, g.s) * std::pow(log_term(x), -g.beta);
  }
  return 0.0;
}

double log_eval(const GaugeSpec& g, double x) {
  check_argument(g, x);
  const double lx = std::log(x);
  switch (g.family) {
    case GaugeFamily::power:
      return g.s * lx;
    case GaugeFamily::example37:
      return lx - std::log(1.0 - lx);
    case GaugeFamily::power_log:
      return g.s * lx - g.beta * std::log(1.0 - lx);
  }
  return 0.0;
}

Derivatives derivatives(const GaugeSpec& g, double x) {
  check_argument(g, x);
  switch (g.family) {
    case GaugeFamily::power:
      return {g.s * std::pow(x, g.s - 1.0), g.s * (g.s - 1.0) * std::pow(x, g.s - 2.0)};
    case GaugeFamily::example37: {
      const double u = log_term(x);
      return {(u + 1.0) / (u * u), (u + 2.0) / (x * u * u * u)};
    }
    case GaugeFamily::power_log: {
      // f' = f q, q = (s + beta/u)/x, q' = (beta/u^2 - s - beta/u)/x^2.
      const double u = log_term(x);
      const double f = eval(g, x);
      const double q = (g.s + g.beta / u) / x;
      const double dq = (g.beta / (u * u) - g.s - g.beta / u) / (x * x);
      return {f * q, f * (q * q + dq)};
    }
  }
  return {};
}

double inverse(const GaugeSpec& g, double y) {
  const double y_max = g.family == GaugeFamily::power ? kInf : 1.0;
  if (!(y > 0.0) || y > y_max || std::isnan(y)) {
    throw DomainError("gauge inverse: value " + format_value(y) + " outside (0, f(x_max)]");
  }
  if (g.family == GaugeFamily::power) return std::exp2(std::log2(y) / g.s);

  // Every family satisfies f(x) <= x on (0, 1] and f(1) = 1, which gives the
  // bracket [min(y, 1), max(y, 1)] in log space.
  double lo = std::log(std::min(y, 1.0));
  double hi = std::log(std::max(y, 1.0));
  if (lo == hi) return 1.0;
  const double log_y = std::log(y);
  double v = std::clamp(log_y / variation_index(g), lo, hi);
  for (int it = 0; it < kInverseMaxIterations; ++it) {
    const double r = log_eval(g, std::exp(v)) - log_y;
    if (std::abs(r) <= kInverseTolerance) break;
    if (r < 0.0) {
      lo = v;
    } else {
      hi = v;
    }
    double next = v - r / elasticity(g, std::exp(v));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == v) break;
    v = next;
  }

  // exp(v) carries the absolute rounding of v; finish in linear space.
  double x = std::exp(v);
  double best = x;
  double best_err = std::abs(eval(g, x) - y);
  for (int it = 0; it < 8 && best_err > kInverseTolerance * y; ++it) {
    const double next = x - (eval(g, x) - y) / derivatives(g, x).first;
    if (!(next > 0.0) || next > x_max(g)) break;
    x = next;
    const double err = std::abs(eval(g, x) - y);
    if (err < best_err) {
      best = x;
      best_err = err;
    }
  }
  if (best_err <= kInverseAcceptTolerance * y) return best;
  throw ConvergenceError("gauge inverse did not converge for y=" + format_value(y));
}

HValue h_and_hprime(const GaugeSpec& g, double x) {
  if (!(x > 0.0)) throw DomainError("h: argument must be positive");
  const double t = inverse(g, 1.0 / x);
  const double ft_over_t = eval(g, t) / t;
  return {1.0 / t, ft_over_t * ft_over_t / derivatives(g, t).first};
}

double lambert_w(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("lambert_w: principal branch requires finite x >= 0");
  }
  if (x == 0.0) return 0.0;
  double w;
  if (x <= std::numbers::e) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int it = 0; it < kLambertMaxIterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::abs(dw) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) {
      return w;
    }
  }
  throw ConvergenceError("lambert_w: Halley iteration did not converge for x=" +
                         format_value(x));
}

const CheckEntry* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool ValidationReport::passed(std::string_view name) const {
  const auto* c = find(name);
  return c != nullptr && c->passed;
}

bool ValidationReport::property_r() const {
  return passed("convex") && passed("fprime_vanishes_at_zero");
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.passed; });
}

ValidationReport validate_gauge(const GaugeSpec& g) {
  return validate_gauge(g, Interval{1e-12, std::min(x_max(g), 1.0)});
}

ValidationReport validate_gauge(const GaugeSpec& g, Interval t0_search) {
  check_parameters(g);
  if (!(t0_search.lo > 0.0) || !(t0_search.hi > t0_search.lo) || t0_search.hi > x_max(g)) {
    throw DomainError("validate_gauge: search interval must satisfy 0 < lo < hi <= x_max");
  }
  constexpr int kGridPoints = 64;
  ValidationReport report;
  report.grid = t0_search;
  report.grid_points = kGridPoints;

  std::vector<double> grid(kGridPoints);
  const double llo = std::log(t0_search.lo);
  const double lhi = std::log(t0_search.hi);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = i + 1 == kGridPoints ? t0_search.hi
                                    : std::exp(llo + (lhi - llo) * i / (kGridPoints - 1));
  }

  double min_f = kInf;
  double min_fp = kInf;
  double min_fpp_scaled = kInf;
  double max_logconc = -kInf;
  bool logconc_prefix = true;
  for (double x : grid) {
    const double f = eval(g, x);
    const auto d = derivatives(g, x);
    min_f = std::min(min_f, f);
    min_fp = std::min(min_fp, d.first);
    // Scale f'' by x/f' so the threshold is dimensionless.
    min_fpp_scaled = std::min(min_fpp_scaled, d.second * x / d.first);
    // (log f)'' = (f f'' - f'^2) / f^2, reported as x^2 (log f)''.
    const double logconc = x * x * (f * d.second - d.first * d.first) / (f * f);
    max_logconc = std::max(max_logconc, logconc);
    if (logconc_prefix && logconc <= 0.0) {
      report.verified_t0 = x;
    } else {
      logconc_prefix = false;
    }
  }

  report.checks.push_back({"positive", min_f > 0.0, min_f, 0.0, "min f on grid"});
  report.checks.push_back({"increasing", min_fp > 0.0, min_fp, 0.0, "min f' on grid"});
  report.checks.push_back({"convex", min_fpp_scaled >= -1e-12, min_fpp_scaled, -1e-12,
                           "min x f''/f' on grid"});
  report.checks.push_back({"log_concave", max_logconc <= 0.0, max_logconc, 0.0,
                           "max x^2 (log f)'' on grid"});

  // f'(10^-k), k = 4..12, must decrease strictly and lose at least half its size.
  {
    std::vector<double> samples;
    for (int k = 4; k <= 12; ++k) {
      const double x = std::pow(10.0, -k);
      if (x <= x_max(g)) samples.push_back(derivatives(g, x).first);
    }
    bool strictly_decreasing = true;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      strictly_decreasing = strictly_decreasing && samples[i] < samples[i - 1];
    }
    const double ratio = samples.back() / samples.front();
    report.checks.push_back({"fprime_vanishes_at_zero", strictly_decreasing && ratio <= 0.5,
                             ratio, 0.5,
                             "f'(1e-12)/f'(1e-4); samples must decrease strictly"});
  }

  // Regular variation trend: |f(2x)/f(x) - 2^s| nonincreasing over x = 1e-4, 1e-8, 1e-12
  // and at most 0.1 at the smallest probe.
  {
    const double s = variation_index(g);
    double prev = kInf;
    bool nonincreasing = true;
    double last = 0.0;
    for (double x : {1e-4, 1e-8, 1e-12}) {
      last = std::abs(eval(g, 2.0 * x) / eval(g, x) - std::pow(2.0, s));
      nonincreasing = nonincreasing && last <= prev + 1e-15;
      prev = last;
    }
    report.checks.push_back({"regular_variation", nonincreasing && last <= 0.1, last, 0.1,
                             "|f(2x)/f(x) - 2^s| at x=1e-12, nonincreasing in x"});
  }
  return report;
}

std::vector<RvDeviation> rv_index_check(const GaugeSpec& g, std::span<const double> a_list,
                                        double x_probe) {
  const double s = variation_index(g);
  std::vector<RvDeviation> out;
  out.reserve(a_list.size());
  for (double a : a_list) {
    if (!(a > 0.0)) throw DomainError("rv_index_check: scale factors must be positive");
    RvDeviation d;
    d.a = a;
    d.ratio_deviation = std::abs(eval(g, a * x_probe) / eval(g, x_probe) - std::pow(a, s));
    d.inverse_deviation =
        std::abs(inverse(g, x_probe) / inverse(g, a * x_probe) - std::pow(a, -1.0 / s));
    out.push_back(d);
  }
  return out;
}

}  // namespace qcm
