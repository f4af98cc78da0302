#include "qcm/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcm/error.hpp"
#include "qcm/io.hpp"
#include "qcm/parallel.hpp"

namespace qcm {

namespace {

constexpr char kNormalizationNote[] =
    "upper estimates U = |[P_L,tau]|_pi for averaging projections; "
    "H_f(C_f) normalized to 1";

int resolve_dimension(const GaugeSpec& g, std::optional<int> n) {
  return n.value_or(default_dimension(g));
}

nlohmann::json base_parameters(const GaugeSpec& g, int n, const WeightSequence& pi) {
  return {{"gauge", gauge_to_json(g)}, {"n", n}, {"weights", weights_to_json(pi)}};
}

bool is_power(const GaugeSpec& g) { return g.family == GaugeFamily::power; }

double tuple_norm_of(std::span<const SingularSpectrum> spectra, const WeightSequence& pi) {
  double norm = 0.0;
  for (const auto& s : spectra) norm = std::max(norm, phi_norm(pi, s));
  return norm;
}

void check_levels(int level_lo, int level_hi, int depth) {
  if (level_lo < 1) {
    throw DomainError("projection level 0 is excluded (P_0 is the rank-one average)");
  }
  if (level_hi < level_lo || level_hi >= depth) {
    throw DepthError("projection levels must satisfy 1 <= lo <= hi < depth");
  }
}

// Window positivity on a coarse sample of [N, min(last, 1e5)].
nlohmann::json window_metadata(const GaugeSpec& g, const WeightSequence& pi, bool& positive) {
  const std::int64_t hi = std::min<std::int64_t>(pi.last_index(), 100000);
  double inf = std::numeric_limits<double>::infinity();
  double sup = 0.0;
  for (auto m : start_index_grid(pi.start_index(), hi)) {
    const double v = window_value(g, pi, m);
    inf = std::min(inf, v);
    sup = std::max(sup, v);
  }
  positive = inf >= 0.1 * sup;
  return {{"inf", inf}, {"sup", sup}, {"m_lo", pi.start_index()}, {"m_hi", hi},
          {"positive", positive}};
}

}  // namespace

Verdict verdict_at_most(std::string invariant, double measured, double tolerance, bool fatal) {
  Verdict v;
  v.invariant = std::move(invariant);
  v.relation = "<=";
  v.tolerance = tolerance;
  v.measured = measured;
  v.slack = tolerance - measured;
  v.passed = measured <= tolerance;
  v.fatal = fatal;
  return v;
}

Verdict verdict_at_least(std::string invariant, double measured, double tolerance, bool fatal) {
  Verdict v;
  v.invariant = std::move(invariant);
  v.relation = ">=";
  v.tolerance = tolerance;
  v.measured = measured;
  v.slack = measured - tolerance;
  v.passed = measured >= tolerance;
  v.fatal = fatal;
  return v;
}

bool ExperimentResult::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.passed || !v.fatal; });
}

const Verdict* ExperimentResult::verdict(std::string_view invariant) const {
  for (const auto& v : verdicts) {
    if (v.invariant == invariant) return &v;
  }
  return nullptr;
}

std::vector<double> ExperimentResult::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DomainError("no column named " + std::string(name));
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(idx));
  return out;
}

ExperimentResult k_upper_curve(const GaugeSpec& g, std::optional<int> n_opt,
                               const WeightSequence& pi, int depth, int level_lo, int level_hi,
                               unsigned threads) {
  check_levels(level_lo, level_hi, depth);
  const int n = resolve_dimension(g, n_opt);
  const auto complex = build_complex(g, depth, n);
  const auto model = build_model(complex, depth);
  const auto sums = pi.partial_sums();

  const auto count = static_cast<std::size_t>(level_hi - level_lo + 1);
  std::vector<CommutatorReport> reports(count);
  parallel_for(count, threads, [&](std::size_t i) {
    reports[i] = commutator_norms(model, level_lo + static_cast<int>(i), pi);
  });

  ExperimentResult result;
  result.id = "k-upper";
  result.parameters = base_parameters(g, n, pi);
  result.parameters["depth"] = depth;
  result.parameters["levels"] = {level_lo, level_hi};
  result.columns = {"L", "cells", "norm", "supnorm_bound", "lemma31_bound"};

  double worst_cell_bound = 0.0;
  double worst_sup = 0.0;
  double min_norm = std::numeric_limits<double>::infinity();
  double max_norm = 0.0;
  int argmin = level_lo;
  for (std::size_t i = 0; i < count; ++i) {
    const int level = level_lo + static_cast<int>(i);
    const auto cells = std::uint64_t{1} << (n * level);
    if (cells > pi.size()) {
      throw InsufficientWeightsError("the k-upper bound needs " + std::to_string(cells) +
                                     " weights");
    }
    const double bound = 2.0 * std::sqrt(static_cast<double>(n)) * complex.lambda(level) *
                         sums[static_cast<std::size_t>(cells)];
    const auto& r = reports[i];
    result.rows.push_back({static_cast<double>(level), static_cast<double>(cells), r.tuple_norm,
                           r.sup_norm_bound, bound});
    worst_cell_bound = std::max(worst_cell_bound, r.tuple_norm / bound);
    worst_sup = std::max(worst_sup, r.operator_norm / r.sup_norm_bound);
    if (r.tuple_norm < min_norm) {
      min_norm = r.tuple_norm;
      argmin = level;
    }
    max_norm = std::max(max_norm, r.tuple_norm);
  }
  result.verdicts.push_back(verdict_at_most("lemma31_bound", worst_cell_bound, 1.0));
  result.verdicts.push_back(verdict_at_most("sup_norm_bound", worst_sup, 1.0));

  bool window_positive = false;
  result.metadata["obstruction_window"] = window_metadata(g, pi, window_positive);
  const double first = reports.front().tuple_norm;
  const double last = reports.back().tuple_norm;
  if (window_positive) {
    result.verdicts.push_back(verdict_at_most("curve_bounded", max_norm / min_norm, 10.0, false));
  } else {
    result.verdicts.push_back(verdict_at_most("curve_vanishing", last / first, 1.0, false));
  }
  const double s = variation_index(g);
  result.metadata["kappa_upper"] = std::pow(min_norm, s);
  result.metadata["kappa_argmin_level"] = argmin;
  result.metadata["normalization"] = kNormalizationNote;
  result.metadata["discretization_error"] = complex.lambda(depth);
  return result;
}

ExperimentResult ampliation_check(const GaugeSpec& g, std::optional<int> n_opt,
                                  const WeightSequence& pi_eps, int depth, int level,
                                  std::span<const int> m_list, double epsilon,
                                  unsigned threads) {
  check_levels(level, level, depth);
  if (m_list.empty()) throw DomainError("ampliation_check needs at least one m");
  const int n = resolve_dimension(g, n_opt);
  const auto complex = build_complex(g, depth, n);
  const auto model = build_model(complex, depth);
  const auto report = commutator_norms(model, level, pi_eps);
  const double s = variation_index(g);
  const double base = report.tuple_norm;

  std::size_t spectrum_length = 0;
  for (const auto& sp : report.spectra) spectrum_length = std::max(spectrum_length, sp.size());
  const double slack = pi_eps[0] * report.operator_norm * static_cast<double>(spectrum_length);

  std::vector<double> ampliated(m_list.size());
  parallel_for(m_list.size(), threads, [&](std::size_t i) {
    std::vector<SingularSpectrum> amp;
    for (const auto& sp : report.spectra) amp.push_back(ampliate_spectrum(sp, m_list[i]));
    ampliated[i] = tuple_norm_of(amp, pi_eps);
  });

  ExperimentResult result;
  result.id = "ampliation";
  result.parameters = base_parameters(g, n, pi_eps);
  result.parameters["depth"] = depth;
  result.parameters["level"] = level;
  result.parameters["m_list"] = std::vector<int>(m_list.begin(), m_list.end());
  result.parameters["epsilon"] = epsilon;
  result.columns = {"m", "ampliated_norm", "scaled_norm", "deviation", "relative_deviation"};

  double worst = 0.0;
  double worst_relative = 0.0;
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    const double scaled = std::pow(static_cast<double>(m_list[i]), 1.0 / s) * base;
    const double dev = std::abs(ampliated[i] - scaled);
    const double rel = dev / base;
    result.rows.push_back({static_cast<double>(m_list[i]), ampliated[i], scaled, dev, rel});
    worst = std::max(worst, dev / (epsilon * base + slack));
    worst_relative = std::max(worst_relative, rel);
  }
  result.verdicts.push_back(verdict_at_most("ampliation_deviation", worst, 1.0));
  result.verdicts.push_back(
      verdict_at_most("relative_deviation_within_epsilon", worst_relative, epsilon, false));
  result.metadata["base_norm"] = base;
  result.metadata["operator_norm"] = report.operator_norm;
  result.metadata["spectrum_length"] = spectrum_length;
  result.metadata["slack"] = slack;
  result.metadata["start_index"] = pi_eps.start_index();
  result.metadata["normalization"] = kNormalizationNote;
  return result;
}

double family_upper_estimate(const CantorComplex& c, const CellFamily& family, int rel_depth,
                             int rel_fine, const WeightSequence& pi) {
  if (family.empty()) throw EmptySelectionError("cell family is empty");
  if (rel_depth < 1 || rel_fine < rel_depth) {
    throw DepthError("need 1 <= rel_depth <= rel_fine");
  }
  const int generation = static_cast<int>(family.front().size());
  const auto model = build_model(c, generation + rel_fine, family);
  return commutator_norms(model, generation + rel_depth, pi).tuple_norm;
}

ExperimentResult subcube_scaling_check(const GaugeSpec& g, std::optional<int> n_opt,
                                       const WeightSequence& pi,
                                       std::span<const int> word_lengths,
                                       std::span<const int> rel_depths, int rel_fine,
                                       unsigned threads) {
  if (word_lengths.empty() || rel_depths.empty()) {
    throw DomainError("scaling check needs word lengths and relative depths");
  }
  const int n = resolve_dimension(g, n_opt);
  const int max_len = *std::max_element(word_lengths.begin(), word_lengths.end());
  const int min_len = *std::min_element(word_lengths.begin(), word_lengths.end());
  const int max_d = *std::max_element(rel_depths.begin(), rel_depths.end());
  if (min_len < 0) throw DomainError("word lengths must be >= 0");
  if (rel_fine < max_d) throw DepthError("rel_fine must be >= every relative depth");
  const auto complex = build_complex(g, max_len + rel_fine, n);
  const double s = variation_index(g);

  struct Task {
    int length;
    int d;
    std::uint64_t rank;
  };
  std::vector<Task> tasks;
  for (int length : word_lengths) {
    for (int d : rel_depths) {
      const std::uint64_t words = std::uint64_t{1} << (n * length);
      for (std::uint64_t r = 0; r < words; ++r) tasks.push_back({length, d, r});
    }
  }
  std::vector<double> root(rel_depths.size());
  parallel_for(rel_depths.size(), threads, [&](std::size_t i) {
    root[i] = family_upper_estimate(complex, {Word(n)}, rel_depths[i], rel_fine, pi);
  });
  std::vector<double> values(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const auto& t = tasks[i];
    values[i] = family_upper_estimate(complex, {Word::from_rank(n, t.length, t.rank)}, t.d,
                                      rel_fine, pi);
  });

  ExperimentResult result;
  result.id = "scaling";
  result.parameters = base_parameters(g, n, pi);
  result.parameters["word_lengths"] = std::vector<int>(word_lengths.begin(), word_lengths.end());
  result.parameters["rel_depths"] = std::vector<int>(rel_depths.begin(), rel_depths.end());
  result.parameters["rel_fine"] = rel_fine;
  result.columns = {"word_length", "word_rank", "rel_depth", "U_word", "U_expected",
                    "relative_error"};

  double worst_exact = 0.0;
  double worst_approx = 0.0;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const auto d_idx = static_cast<std::size_t>(
        std::find(rel_depths.begin(), rel_depths.end(), t.d) - rel_depths.begin());
    const double expected = root[d_idx] * std::pow(2.0, -n * t.length / s);
    const double rel = std::abs(values[i] - expected) / expected;
    result.rows.push_back({static_cast<double>(t.length), static_cast<double>(t.rank),
                           static_cast<double>(t.d), values[i], expected, rel});
    worst_exact = std::max(worst_exact, rel);
    if (t.length <= 2) worst_approx = std::max(worst_approx, rel);
    // Cells of equal generation are congruent: compare with the first word.
    if (t.rank != 0) {
      const double reference = values[i - static_cast<std::size_t>(t.rank)];
      if (values[i] != reference) ++mismatches;
    }
  }
  if (is_power(g)) {
    result.verdicts.push_back(verdict_at_most("scaling_exact", worst_exact, 1e-12));
  } else {
    result.verdicts.push_back(verdict_at_most("scaling_approx", worst_approx, 0.1, false));
  }
  result.verdicts.push_back(
      verdict_at_most("congruent_words_identical", static_cast<double>(mismatches), 0.0));

  nlohmann::json kappa = nlohmann::json::array();
  for (std::size_t i = 0; i < rel_depths.size(); ++i) {
    kappa.push_back({{"rel_depth", rel_depths[i]}, {"U_root", root[i]},
                     {"kappa_upper", std::pow(root[i], s)}});
  }
  result.metadata["root"] = kappa;
  result.metadata["normalization"] = kNormalizationNote;
  return result;
}

KappaEstimate kappa_estimate(const GaugeSpec& g, std::optional<int> n, const WeightSequence& pi,
                             int depth, int level_lo, int level_hi, unsigned threads) {
  check_levels(level_lo, level_hi, depth);
  const auto complex = build_complex(g, depth, n);
  const auto model = build_model(complex, depth);
  KappaEstimate est;
  est.level_lo = level_lo;
  est.upper_estimates.resize(static_cast<std::size_t>(level_hi - level_lo + 1));
  parallel_for(est.upper_estimates.size(), threads, [&](std::size_t i) {
    est.upper_estimates[i] = commutator_norms(model, level_lo + static_cast<int>(i), pi).tuple_norm;
  });
  const auto it = std::min_element(est.upper_estimates.begin(), est.upper_estimates.end());
  est.argmin_level = level_lo + static_cast<int>(it - est.upper_estimates.begin());
  est.value = std::pow(*it, variation_index(g));
  return est;
}

std::vector<CellFamily> small_set_families(int dimension, std::span<const int> ks,
                                           std::span<const int> levels) {
  std::vector<CellFamily> out;
  for (int level : levels) {
    const std::uint64_t available = std::uint64_t{1} << (dimension * level);
    for (int k : ks) {
      if (k < 1 || static_cast<std::uint64_t>(k) > available) {
        throw DomainError("family size " + std::to_string(k) + " unavailable at generation " +
                          std::to_string(level));
      }
      CellFamily fam;
      for (int r = 0; r < k; ++r) {
        fam.push_back(Word::from_rank(dimension, level, static_cast<std::uint64_t>(r)));
      }
      out.push_back(std::move(fam));
    }
  }
  return out;
}

std::string_view to_string(ShrinkingKind kind) {
  switch (kind) {
    case ShrinkingKind::single:
      return "single";
    case ShrinkingKind::pair:
      return "pair";
    case ShrinkingKind::constant:
      return "constant";
  }
  return "single";
}

ShrinkingKind parse_shrinking_kind(std::string_view name) {
  if (name == "single") return ShrinkingKind::single;
  if (name == "pair") return ShrinkingKind::pair;
  if (name == "constant") return ShrinkingKind::constant;
  throw DomainError("unknown family kind '" + std::string(name) +
                    "' (expected single, pair, constant)");
}

std::vector<CellFamily> shrinking_families(int dimension, ShrinkingKind kind,
                                           std::span<const int> levels) {
  std::vector<CellFamily> out;
  for (int level : levels) {
    if (level < 1) throw DomainError("family generations must be >= 1");
    CellFamily fam;
    switch (kind) {
      case ShrinkingKind::single:
        fam.push_back(Word::from_rank(dimension, level, 0));
        break;
      case ShrinkingKind::pair:
        fam.push_back(Word::from_rank(dimension, level, 0));
        fam.push_back(Word::from_rank(dimension, level, 1));
        break;
      case ShrinkingKind::constant: {
        const std::uint64_t all = std::uint64_t{1} << (dimension * level);
        for (std::uint64_t r = 0; r < all; ++r) fam.push_back(Word::from_rank(dimension, level, r));
        break;
      }
    }
    out.push_back(std::move(fam));
  }
  return out;
}

namespace {

struct FamilyRow {
  int generation = 0;
  std::size_t cells = 0;
  double measure = 0.0;
  double upper = 0.0;
};

std::vector<FamilyRow> evaluate_families(const CantorComplex& complex,
                                         std::span<const CellFamily> families, int rel_depth,
                                         int rel_fine, const WeightSequence& pi,
                                         unsigned threads) {
  std::vector<FamilyRow> rows(families.size());
  parallel_for(families.size(), threads, [&](std::size_t i) {
    const auto& fam = families[i];
    if (fam.empty()) throw EmptySelectionError("cell family is empty");
    FamilyRow row;
    row.generation = static_cast<int>(fam.front().size());
    row.cells = fam.size();
    row.measure = static_cast<double>(fam.size()) * cell_measure(complex, fam.front());
    row.upper = family_upper_estimate(complex, fam, rel_depth, rel_fine, pi);
    rows[i] = row;
  });
  return rows;
}

int max_generation(std::span<const CellFamily> families) {
  if (families.empty()) throw DomainError("no cell families given");
  int g = 0;
  for (const auto& f : families) {
    if (f.empty()) throw EmptySelectionError("cell family is empty");
    g = std::max(g, static_cast<int>(f.front().size()));
  }
  return g;
}

}  // namespace

ExperimentResult small_set_bound_check(const GaugeSpec& g, std::optional<int> n_opt,
                                       const WeightSequence& pi,
                                       std::span<const CellFamily> families, int rel_depth,
                                       int rel_fine, unsigned threads) {
  const int n = resolve_dimension(g, n_opt);
  const auto complex = build_complex(g, max_generation(families) + rel_fine, n);
  const double s = variation_index(g);
  const auto rows = evaluate_families(complex, families, rel_depth, rel_fine, pi, threads);

  ExperimentResult result;
  result.id = "small-set";
  result.parameters = base_parameters(g, n, pi);
  result.parameters["rel_depth"] = rel_depth;
  result.parameters["rel_fine"] = rel_fine;
  result.parameters["families"] = families.size();
  result.columns = {"family", "generation", "cells", "measure", "U", "ratio"};

  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  double min_measure = std::numeric_limits<double>::infinity();
  double max_measure = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double ratio = r.upper / std::pow(r.measure, 1.0 / s);
    result.rows.push_back({static_cast<double>(i), static_cast<double>(r.generation),
                           static_cast<double>(r.cells), r.measure, r.upper, ratio});
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    min_measure = std::min(min_measure, r.measure);
    max_measure = std::max(max_measure, r.measure);
  }
  result.verdicts.push_back(
      verdict_at_most("ratio_spread", max_ratio / min_ratio, 4.0, is_power(g)));
  result.verdicts.push_back(
      verdict_at_least("measure_span_decades", std::log10(max_measure / min_measure), 3.0, false));
  result.metadata["fitted_C"] = max_ratio;
  result.metadata["normalization"] = kNormalizationNote;
  return result;
}

ExperimentResult singular_demo(const GaugeSpec& g, std::optional<int> n_opt,
                               const WeightSequence& pi, std::span<const CellFamily> families,
                               int rel_depth, int rel_fine, unsigned threads) {
  const int n = resolve_dimension(g, n_opt);
  const auto complex = build_complex(g, max_generation(families) + rel_fine, n);
  const double s = variation_index(g);
  const double root = family_upper_estimate(complex, {Word(n)}, rel_depth, rel_fine, pi);
  const double constant = 2.0 * root;
  const auto rows = evaluate_families(complex, families, rel_depth, rel_fine, pi, threads);

  ExperimentResult result;
  result.id = "singular-demo";
  result.parameters = base_parameters(g, n, pi);
  result.parameters["rel_depth"] = rel_depth;
  result.parameters["rel_fine"] = rel_fine;
  result.columns = {"step", "generation", "cells", "measure", "U", "bound"};

  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double bound = constant * std::pow(r.measure, 1.0 / s);
    result.rows.push_back({static_cast<double>(i), static_cast<double>(r.generation),
                           static_cast<double>(r.cells), r.measure, r.upper, bound});
    worst = std::max(worst, r.upper / bound);
  }
  result.verdicts.push_back(verdict_at_most("small_set_bound", worst, 1.0));
  result.verdicts.push_back(
      verdict_at_most("decay", rows.back().upper / rows.front().upper, 0.5, false));
  result.metadata["C"] = constant;
  result.metadata["U_root"] = root;
  result.metadata["normalization"] = kNormalizationNote;
  return result;
}

ExperimentResult shift_invariance_check(const GaugeSpec& g, std::optional<int> n_opt,
                                        const WeightSequence& pi, int depth, int level_lo,
                                        int level_hi, std::span<const int> shifts,
                                        unsigned threads) {
  check_levels(level_lo, level_hi, depth);
  if (shifts.empty()) throw DomainError("shift check needs at least one shift");
  std::vector<int> sorted_shifts(shifts.begin(), shifts.end());
  std::sort(sorted_shifts.begin(), sorted_shifts.end());
  if (sorted_shifts.front() < 0) throw DomainError("shifts must be >= 0");
  const int n = resolve_dimension(g, n_opt);
  const auto complex = build_complex(g, depth, n);
  const auto model = build_model(complex, depth);

  std::vector<WeightSequence> shifted;
  for (int t : sorted_shifts) shifted.push_back(shift(pi, static_cast<std::size_t>(t)));

  const auto levels = static_cast<std::size_t>(level_hi - level_lo + 1);
  std::vector<CommutatorReport> reports(levels);
  std::vector<std::vector<double>> shifted_norms(levels);
  parallel_for(levels, threads, [&](std::size_t i) {
    reports[i] = commutator_norms(model, level_lo + static_cast<int>(i), pi);
    for (const auto& w : shifted) {
      shifted_norms[i].push_back(tuple_norm_of(reports[i].spectra, w));
    }
  });

  ExperimentResult result;
  result.id = "shift-check";
  result.parameters = base_parameters(g, n, pi);
  result.parameters["depth"] = depth;
  result.parameters["levels"] = {level_lo, level_hi};
  result.parameters["shifts"] = sorted_shifts;
  result.columns = {"L", "t", "shifted_norm", "norm", "gap", "bound"};

  double min_gap = std::numeric_limits<double>::infinity();
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_drop = 0.0;
  for (std::size_t i = 0; i < levels; ++i) {
    const auto& r = reports[i];
    double prev_gap = 0.0;
    for (std::size_t j = 0; j < sorted_shifts.size(); ++j) {
      const double gap = r.tuple_norm - shifted_norms[i][j];
      const double bound = sorted_shifts[j] * pi[0] * r.operator_norm;
      result.rows.push_back({static_cast<double>(level_lo + static_cast<int>(i)),
                             static_cast<double>(sorted_shifts[j]), shifted_norms[i][j],
                             r.tuple_norm, gap, bound});
      min_gap = std::min(min_gap, gap);
      worst_excess = std::max(worst_excess, gap - bound);
      if (j > 0) worst_drop = std::max(worst_drop, (prev_gap - gap) / r.tuple_norm);
      prev_gap = gap;
    }
  }
  result.verdicts.push_back(verdict_at_least("shift_gap_nonnegative", min_gap, 0.0));
  result.verdicts.push_back(verdict_at_most("shift_gap_bound", worst_excess, 0.0));
  result.verdicts.push_back(verdict_at_most("gap_monotone_in_t", worst_drop, 1e-14));

  // Decay of the smallest positive shift's gap from the first to the last level.
  const auto positive = std::find_if(sorted_shifts.begin(), sorted_shifts.end(),
                                     [](int t) { return t > 0; });
  if (positive != sorted_shifts.end() && levels > 1) {
    const auto j = static_cast<std::size_t>(positive - sorted_shifts.begin());
    const double first = reports.front().tuple_norm - shifted_norms.front()[j];
    const double last = reports.back().tuple_norm - shifted_norms.back()[j];
    result.verdicts.push_back(verdict_at_most("gap_decay", last / first, 0.1, false));
  }
  result.metadata["normalization"] = kNormalizationNote;
  return result;
}

}  // namespace qcm
