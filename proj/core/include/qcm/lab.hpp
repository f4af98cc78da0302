#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcm/fractal.hpp"
#include "qcm/gauge.hpp"
#include "qcm/opmodel.hpp"
#include "qcm/seqnorm.hpp"

namespace qcm {

/// A named inequality checked by an experiment. `relation` is "<=" or ">=";
/// slack is the signed margin (tolerance - measured for "<=").
struct Verdict {
  std::string invariant;
  std::string relation = "<=";
  double tolerance = 0.0;
  double measured = 0.0;
  double slack = 0.0;
  bool passed = false;
  /// Non-fatal verdicts flag empirical trends; they never fail a run.
  bool fatal = true;
};

Verdict verdict_at_most(std::string invariant, double measured, double tolerance,
                        bool fatal = true);
Verdict verdict_at_least(std::string invariant, double measured, double tolerance,
                         bool fatal = true);

struct ExperimentResult {
  std::string id;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Verdict> verdicts;
  nlohmann::json metadata = nlohmann::json::object();

  /// True when every fatal verdict passed.
  bool passed() const;
  const Verdict* verdict(std::string_view invariant) const;
  std::vector<double> column(std::string_view name) const;
};

/// All modulus values below are upper estimates U = |[P_L, tau]|_pi for the
/// canonical averaging projections, in the normalization H_f(C_f) = 1.

/// Rows (L, cells, norm, supnorm_bound, lemma31_bound) for L in [level_lo, level_hi].
/// Throws DomainError for level_lo < 1.
ExperimentResult k_upper_curve(const GaugeSpec& g, std::optional<int> n, const WeightSequence& pi,
                               int depth, int level_lo, int level_hi, unsigned threads = 1);

/// Compares |X (x) I_m|_pi with m^{1/s} |X|_pi for X = [P_level, tau].
ExperimentResult ampliation_check(const GaugeSpec& g, std::optional<int> n,
                                  const WeightSequence& pi_eps, int depth, int level,
                                  std::span<const int> m_list, double epsilon,
                                  unsigned threads = 1);

/// U(w, d) for every word of each length against U(root, d) 2^{-n|w|/s}.
/// Models have fine depth |w| + rel_fine, projections at |w| + d.
ExperimentResult subcube_scaling_check(const GaugeSpec& g, std::optional<int> n,
                                       const WeightSequence& pi,
                                       std::span<const int> word_lengths,
                                       std::span<const int> rel_depths, int rel_fine,
                                       unsigned threads = 1);

struct KappaEstimate {
  /// (min_L U(root, L))^s, an upper estimate of kappa in the H_f(C_f) = 1 normalization.
  double value = 0.0;
  int argmin_level = 0;
  int level_lo = 0;
  std::vector<double> upper_estimates;
};

KappaEstimate kappa_estimate(const GaugeSpec& g, std::optional<int> n, const WeightSequence& pi,
                             int depth, int level_lo, int level_hi, unsigned threads = 1);

/// A union of generation cells of one common generation.
using CellFamily = std::vector<Word>;

/// K first cells of generation L for every K in ks and L in levels.
std::vector<CellFamily> small_set_families(int dimension, std::span<const int> ks,
                                           std::span<const int> levels);

enum class ShrinkingKind { single, pair, constant };

std::string_view to_string(ShrinkingKind kind);
ShrinkingKind parse_shrinking_kind(std::string_view name);

/// single: [1,...,1]; pair: [1,..,1,1] and [1,..,1,2]; constant: every cell of
/// the generation (negative control, measure 1).
std::vector<CellFamily> shrinking_families(int dimension, ShrinkingKind kind,
                                           std::span<const int> levels);

/// U(Omega) / H_f(Omega)^{1/s} over unions of generation cells.
ExperimentResult small_set_bound_check(const GaugeSpec& g, std::optional<int> n,
                                       const WeightSequence& pi,
                                       std::span<const CellFamily> families, int rel_depth,
                                       int rel_fine, unsigned threads = 1);

/// U(omega_m) along families whose measure shrinks, against
/// C H_f(omega_m)^{1/s} with C = 2 U(C_f).
ExperimentResult singular_demo(const GaugeSpec& g, std::optional<int> n, const WeightSequence& pi,
                               std::span<const CellFamily> families, int rel_depth, int rel_fine,
                               unsigned threads = 1);

/// Gap |[P_L,tau]|_pi - |[P_L,tau]|_{S^t pi} against t pi_1 ||[P_L,tau]||.
ExperimentResult shift_invariance_check(const GaugeSpec& g, std::optional<int> n,
                                        const WeightSequence& pi, int depth, int level_lo,
                                        int level_hi, std::span<const int> shifts,
                                        unsigned threads = 1);

/// Tuple norm for the model restricted to `family` (fine depth L + rel_fine,
/// projection at L + rel_depth, L the family generation).
double family_upper_estimate(const CantorComplex& c, const CellFamily& family, int rel_depth,
                             int rel_fine, const WeightSequence& pi);

}  // namespace qcm
