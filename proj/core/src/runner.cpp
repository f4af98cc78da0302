#include "qcm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "qcm/error.hpp"
#include "qcm/io.hpp"

namespace qcm {

namespace {

using json = nlohmann::json;

constexpr std::int64_t kMaxWeightCount = std::int64_t{1} << 24;

std::string join_path(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Typed access to one JSON object; every problem is appended with its path.
class Fields {
 public:
  Fields(const json* obj, std::string path, std::vector<std::string>& problems)
      : obj_(obj), path_(std::move(path)), problems_(problems) {
    if (obj_ != nullptr && !obj_->is_object()) {
      fail_here("expected an object");
      obj_ = nullptr;
    }
  }

  void allow(std::initializer_list<std::string_view> keys) {
    if (obj_ == nullptr) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
        fail(it.key(), "unknown field");
      }
    }
  }

  bool has(std::string_view key) const { return obj_ != nullptr && obj_->contains(key); }

  const json* raw(std::string_view key) const {
    if (!has(key)) return nullptr;
    return &(*obj_)[std::string(key)];
  }

  std::optional<double> number(std::string_view key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) return fail(key, "expected a number"), std::nullopt;
    return v->get<double>();
  }

  std::optional<std::int64_t> integer(std::string_view key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) return fail(key, "expected an integer"), std::nullopt;
    return v->get<std::int64_t>();
  }

  std::optional<std::string> string(std::string_view key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) return fail(key, "expected a string"), std::nullopt;
    return v->get<std::string>();
  }

  std::optional<std::vector<int>> int_list(std::string_view key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array() || v->empty()) return fail(key, "expected a non-empty integer array"), std::nullopt;
    std::vector<int> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer() || std::abs(e.get<std::int64_t>()) > (1 << 30)) {
        return fail(key, "expected a non-empty integer array"), std::nullopt;
      }
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::optional<std::vector<double>> number_list(std::string_view key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array() || v->empty()) return fail(key, "expected a non-empty number array"), std::nullopt;
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) return fail(key, "expected a non-empty number array"), std::nullopt;
      out.push_back(e.get<double>());
    }
    return out;
  }

  void fail(std::string_view key, std::string_view message) {
    problems_.push_back(join_path(path_, key) + ": " + std::string(message));
  }

  void fail_here(std::string_view message) {
    problems_.push_back((path_.empty() ? std::string("<root>") : path_) + ": " +
                        std::string(message));
  }

  const std::string& path() const { return path_; }

 private:
  const json* obj_;
  std::string path_;
  std::vector<std::string>& problems_;
};

bool uses_depth(std::string_view experiment) {
  return experiment == "k-upper" || experiment == "ampliation" || experiment == "shift-check" ||
         experiment == "cantor-export";
}

bool uses_weights(std::string_view experiment) {
  return experiment != "gauge-check" && experiment != "cantor-export";
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::json:
      return "json";
    case OutputFormat::both:
      return "both";
  }
  return "both";
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }
int min_of(const std::vector<int>& v) { return *std::min_element(v.begin(), v.end()); }

void parse_gauge(Fields& root, RunConfig& cfg, std::vector<std::string>& problems) {
  const json* node = root.raw("gauge");
  if (node == nullptr) {
    root.fail("gauge", "required field missing");
    return;
  }
  Fields f(node, "gauge", problems);
  f.allow({"family", "s", "beta"});
  const auto family = f.string("family");
  if (!family) {
    if (!f.has("family")) f.fail("family", "required field missing");
    return;
  }
  try {
    cfg.gauge.family = parse_gauge_family(*family);
  } catch (const Error& e) {
    f.fail("family", e.what());
    return;
  }
  const auto s = f.number("s");
  const auto beta = f.number("beta");
  switch (cfg.gauge.family) {
    case GaugeFamily::example37:
      if (s && *s != 1.0) f.fail("s", "example37 has index s = 1");
      if (beta && *beta != 0.0) f.fail("beta", "example37 takes no beta");
      cfg.gauge = GaugeSpec::example37();
      return;
    case GaugeFamily::power:
      if (beta && *beta != 0.0) f.fail("beta", "power gauge takes no beta");
      cfg.gauge.s = s.value_or(1.0);
      cfg.gauge.beta = 0.0;
      break;
    case GaugeFamily::power_log:
      cfg.gauge.s = s.value_or(1.0);
      cfg.gauge.beta = beta.value_or(0.0);
      break;
  }
  if (!std::isfinite(cfg.gauge.s) || cfg.gauge.s < 1.0) f.fail("s", "must be >= 1");
  if (!std::isfinite(cfg.gauge.beta) || cfg.gauge.beta < 0.0) f.fail("beta", "must be >= 0");
}

void parse_weights(Fields& root, RunConfig& cfg, std::vector<std::string>& problems) {
  Fields f(root.raw("weights"), "weights", problems);
  auto& w = cfg.weights;
  if (const auto kind = f.string("kind")) w.kind = *kind;
  if (w.kind == "rho") {
    f.allow({"kind", "epsilon", "m_max", "horizon", "start_index"});
  } else if (w.kind == "harmonic") {
    f.allow({"kind", "start_index"});
  } else if (w.kind == "custom") {
    f.allow({"kind", "values", "start_index"});
  } else {
    f.fail("kind", "unknown weight kind '" + w.kind + "' (expected rho, harmonic, custom)");
    return;
  }
  if (const auto v = f.integer("start_index")) {
    w.start_index = *v;
    if (*v < 1) f.fail("start_index", "must be >= 1");
  }
  if (const auto v = f.number("epsilon")) {
    w.epsilon = *v;
    if (!(*v > 0.0)) f.fail("epsilon", "must be > 0");
    if (f.has("start_index")) f.fail("start_index", "cannot be combined with epsilon");
  }
  if (const auto v = f.integer("m_max")) {
    w.m_max = static_cast<int>(*v);
    if (*v < 2 || *v > 1024) f.fail("m_max", "must be in [2, 1024]");
  }
  if (const auto v = f.number("horizon")) {
    w.horizon = *v;
    if (!(*v >= 1.0) || *v > 1e15) f.fail("horizon", "must be in [1, 1e15]");
  }
  if (w.kind == "custom") {
    if (const auto v = f.number_list("values")) {
      w.values = *v;
    } else if (!f.has("values")) {
      f.fail("values", "required for custom weights");
    }
  }
}

void check_small_set_size(Fields& p, const RunConfig& cfg) {
  if (cfg.n * (max_of(cfg.levels) + cfg.rel_fine) > kMaxCellBits) {
    p.fail("levels", "n * (max level + rel_fine) exceeds 20");
  }
  if (cfg.rel_depth < 1) p.fail("rel_depth", "must be >= 1");
  if (cfg.rel_fine < cfg.rel_depth) p.fail("rel_fine", "must be >= rel_depth");
  if (min_of(cfg.levels) < 1) p.fail("levels", "generations must be >= 1");
}

void parse_parameters(Fields& root, RunConfig& cfg, std::vector<std::string>& problems) {
  Fields p(root.raw("parameters"), "parameters", problems);
  const auto& e = cfg.experiment;
  cfg.export_level = cfg.depth;
  cfg.level = std::max(1, cfg.depth - 2);
  cfg.rel_fine = e == "scaling" ? 5 : 4;

  auto read_int = [&](std::string_view key, int& out) {
    if (const auto v = p.integer(key)) {
      if (std::abs(*v) > (1 << 30)) {
        p.fail(key, "out of range");
      } else {
        out = static_cast<int>(*v);
      }
    }
  };

  if (e == "gauge-check") {
    p.allow({"a_list", "x_probe"});
    if (const auto v = p.number_list("a_list")) cfg.a_list = *v;
    if (const auto v = p.number("x_probe")) cfg.x_probe = *v;
    if (std::any_of(cfg.a_list.begin(), cfg.a_list.end(), [](double a) { return !(a > 0.0); })) {
      p.fail("a_list", "entries must be > 0");
    }
    if (!(cfg.x_probe > 0.0)) p.fail("x_probe", "must be > 0");
  } else if (e == "cantor-export") {
    p.allow({"level"});
    read_int("level", cfg.export_level);
    if (cfg.export_level < 0 || cfg.export_level > cfg.depth) {
      p.fail("level", "must be in [0, depth]");
    }
  } else if (e == "rho") {
    p.allow({"count"});
    if (const auto v = p.integer("count")) {
      if (*v < 1 || *v > kMaxWeightCount) {
        p.fail("count", "must be in [1, 2^24]");
      } else {
        cfg.count = static_cast<std::size_t>(*v);
      }
    }
  } else if (e == "k-upper") {
    p.allow({});
  } else if (e == "ampliation") {
    p.allow({"level", "m_list", "epsilon"});
    read_int("level", cfg.level);
    if (const auto v = p.int_list("m_list")) cfg.m_list = *v;
    if (const auto v = p.number("epsilon")) cfg.epsilon = *v;
    if (cfg.level < 1 || cfg.level >= cfg.depth) p.fail("level", "must be in [1, depth)");
    if (min_of(cfg.m_list) < 1 || max_of(cfg.m_list) > 1024) {
      p.fail("m_list", "entries must be in [1, 1024]");
    }
    if (!(cfg.epsilon > 0.0)) p.fail("epsilon", "must be > 0");
  } else if (e == "scaling") {
    p.allow({"word_lengths", "rel_depths", "rel_fine"});
    if (const auto v = p.int_list("word_lengths")) cfg.word_lengths = *v;
    if (const auto v = p.int_list("rel_depths")) cfg.rel_depths = *v;
    read_int("rel_fine", cfg.rel_fine);
    if (min_of(cfg.word_lengths) < 0) p.fail("word_lengths", "entries must be >= 0");
    if (min_of(cfg.rel_depths) < 1) p.fail("rel_depths", "entries must be >= 1");
    if (cfg.rel_fine < max_of(cfg.rel_depths)) p.fail("rel_fine", "must be >= every rel_depth");
    if (cfg.n * (max_of(cfg.word_lengths) + cfg.rel_fine) > kMaxCellBits) {
      p.fail("word_lengths", "n * (max word length + rel_fine) exceeds 20");
    }
  } else if (e == "small-set") {
    p.allow({"ks", "levels", "rel_depth", "rel_fine"});
    if (const auto v = p.int_list("ks")) cfg.ks = *v;
    if (const auto v = p.int_list("levels")) cfg.levels = *v;
    read_int("rel_depth", cfg.rel_depth);
    read_int("rel_fine", cfg.rel_fine);
    check_small_set_size(p, cfg);
    if (min_of(cfg.ks) < 1) p.fail("ks", "entries must be >= 1");
    if (min_of(cfg.levels) >= 1 && cfg.n * min_of(cfg.levels) < 31 &&
        max_of(cfg.ks) > (1 << (cfg.n * min_of(cfg.levels)))) {
      p.fail("ks", "family larger than the number of cells at the smallest level");
    }
  } else if (e == "singular-demo") {
    p.allow({"kind", "levels", "rel_depth", "rel_fine"});
    if (const auto v = p.string("kind")) {
      try {
        cfg.kind = parse_shrinking_kind(*v);
      } catch (const Error& err) {
        p.fail("kind", err.what());
      }
    }
    if (const auto v = p.int_list("levels")) cfg.levels = *v;
    read_int("rel_depth", cfg.rel_depth);
    read_int("rel_fine", cfg.rel_fine);
    check_small_set_size(p, cfg);
  } else if (e == "shift-check") {
    p.allow({"shifts"});
    if (const auto v = p.int_list("shifts")) cfg.shifts = *v;
    if (min_of(cfg.shifts) < 0) p.fail("shifts", "entries must be >= 0");
  }
}

json parameters_json(const RunConfig& cfg) {
  const auto& e = cfg.experiment;
  if (e == "gauge-check") return {{"a_list", cfg.a_list}, {"x_probe", cfg.x_probe}};
  if (e == "cantor-export") return {{"level", cfg.export_level}};
  if (e == "rho") return {{"count", cfg.count}};
  if (e == "ampliation") {
    return {{"level", cfg.level}, {"m_list", cfg.m_list}, {"epsilon", cfg.epsilon}};
  }
  if (e == "scaling") {
    return {{"word_lengths", cfg.word_lengths},
            {"rel_depths", cfg.rel_depths},
            {"rel_fine", cfg.rel_fine}};
  }
  if (e == "small-set") {
    return {{"ks", cfg.ks},
            {"levels", cfg.levels},
            {"rel_depth", cfg.rel_depth},
            {"rel_fine", cfg.rel_fine}};
  }
  if (e == "singular-demo") {
    return {{"kind", std::string(to_string(cfg.kind))},
            {"levels", cfg.levels},
            {"rel_depth", cfg.rel_depth},
            {"rel_fine", cfg.rel_fine}};
  }
  if (e == "shift-check") return {{"shifts", cfg.shifts}};
  return json::object();
}

std::uint64_t pow2(int bits) { return std::uint64_t{1} << bits; }

std::vector<CellFamily> families_for(const RunConfig& cfg) {
  if (cfg.experiment == "small-set") return small_set_families(cfg.n, cfg.ks, cfg.levels);
  return shrinking_families(cfg.n, cfg.kind, cfg.levels);
}

ExperimentResult run_gauge_check(const RunConfig& cfg) {
  const auto report = validate_gauge(cfg.gauge);
  const auto rv = rv_index_check(cfg.gauge, cfg.a_list, cfg.x_probe);
  ExperimentResult result;
  result.id = "gauge-check";
  result.parameters = {{"gauge", gauge_to_json(cfg.gauge)},
                       {"a_list", cfg.a_list},
                       {"x_probe", cfg.x_probe}};
  result.columns = {"a", "ratio_deviation", "inverse_deviation"};
  double worst = 0.0;
  for (const auto& r : rv) {
    result.rows.push_back({r.a, r.ratio_deviation, r.inverse_deviation});
    worst = std::max(worst, r.inverse_deviation);
  }
  result.verdicts.push_back(verdict_at_most("inverse_rv_deviation", worst, 0.05, false));
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", c.measured},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  }
  result.metadata["checks"] = checks;
  result.metadata["grid"] = {report.grid.lo, report.grid.hi};
  result.metadata["grid_points"] = report.grid_points;
  result.metadata["verified_t0"] = report.verified_t0;
  result.metadata["property_r"] = report.property_r();
  result.metadata["all_passed"] = report.all_passed();
  result.metadata["variation_index"] = variation_index(cfg.gauge);
  return result;
}

RunOutput run_cantor_export(const RunConfig& cfg) {
  const auto complex = build_complex(cfg.gauge, cfg.depth, cfg.n);
  auto doc = export_geometry(complex, cfg.export_level);
  ExperimentResult result;
  result.id = "cantor-export";
  result.parameters = {{"gauge", gauge_to_json(cfg.gauge)},
                       {"n", cfg.n},
                       {"depth", cfg.depth},
                       {"level", cfg.export_level}};
  result.columns = {"word_rank", "side", "measure"};
  for (int axis = 1; axis <= cfg.n; ++axis) result.columns.push_back("corner_" + std::to_string(axis));
  double total = 0.0;
  for (const auto& r : doc.records) {
    std::vector<double> row = {static_cast<double>(r.word.rank()), r.side, r.measure};
    row.insert(row.end(), r.corner.begin(), r.corner.end());
    result.rows.push_back(std::move(row));
    total += r.measure;
  }
  result.verdicts.push_back(verdict_at_most("measure_partition", std::abs(total - 1.0), 0.0));
  result.metadata["lambdas"] = complex.lambdas();
  result.metadata["records"] = doc.records.size();
  return {std::move(result), std::move(doc)};
}

ExperimentResult run_rho(const RunConfig& cfg) {
  const auto pi = build_weights(cfg);
  const auto sums = pi.partial_sums();
  ExperimentResult result;
  result.id = "rho";
  result.parameters = {{"gauge", gauge_to_json(cfg.gauge)}, {"weights", weights_to_json(pi)}};
  result.columns = {"k", "weight", "partial_sum", "window"};
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const auto k = pi.start_index() + static_cast<std::int64_t>(i);
    result.rows.push_back({static_cast<double>(k), pi[i], sums[i + 1], window_value(cfg.gauge, pi, k)});
  }
  const std::size_t m_max = std::min<std::size_t>(pi.size(), 64);
  if (m_max >= 2) result.metadata["regularity_alpha"] = regularity_alpha(pi, m_max);
  result.metadata["start_index"] = pi.start_index();
  return result;
}

}  // namespace

json RunConfig::to_json() const {
  json weights_json = {{"kind", weights.kind}};
  if (weights.kind == "rho") {
    if (weights.epsilon) {
      weights_json["epsilon"] = *weights.epsilon;
      weights_json["m_max"] = weights.m_max;
      weights_json["horizon"] = weights.horizon;
    } else {
      weights_json["start_index"] = weights.start_index;
    }
  } else {
    weights_json["start_index"] = weights.start_index;
  }
  if (weights.kind == "custom") weights_json["values"] = weights.values;

  json j = {{"experiment", experiment},
            {"gauge", gauge_to_json(gauge)},
            {"n", n},
            {"parameters", parameters_json(*this)},
            {"output", {{"dir", out_dir.generic_string()},
                        {"format", std::string(to_string(format))}}}};
  if (uses_depth(experiment)) j["depth"] = depth;
  if (experiment == "k-upper" || experiment == "shift-check") {
    j["projection"] = {{"from", level_lo}, {"to", level_hi}};
  }
  if (uses_weights(experiment)) j["weights"] = weights_json;
  return j;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  return parse_config(doc);
}

RunConfig parse_config(const json& document) {
  std::vector<std::string> problems;
  RunConfig cfg;
  Fields root(&document, "", problems);
  root.allow({"experiment", "gauge", "n", "depth", "projection", "weights", "parameters", "output"});
  if (!document.is_object()) throw ConfigError(problems);

  if (const auto e = root.string("experiment")) {
    cfg.experiment = *e;
    if (std::find(kExperiments.begin(), kExperiments.end(), *e) == kExperiments.end()) {
      std::string message = "unknown experiment '" + *e + "'";
      std::vector<std::string_view> close;
      for (auto name : kExperiments) {
        if (edit_distance(name, *e) <= 3) close.push_back(name);
      }
      if (!close.empty()) {
        message += "; did you mean";
        for (std::size_t i = 0; i < close.size(); ++i) {
          message += (i == 0 ? " " : " or ") + std::string(close[i]);
        }
        message += "?";
      }
      message += " (valid:";
      for (auto name : kExperiments) message += " " + std::string(name);
      message += ")";
      root.fail("experiment", message);
    }
  } else if (!root.has("experiment")) {
    root.fail("experiment", "required field missing");
  }

  parse_gauge(root, cfg, problems);
  cfg.n = default_dimension(cfg.gauge);
  if (const auto v = root.integer("n")) {
    if (*v < 1 || *v > kMaxCellBits) {
      root.fail("n", "must be in [1, 20]");
    } else {
      cfg.n = static_cast<int>(*v);
    }
  }
  if (const auto v = root.integer("depth")) {
    if (*v < 1 || *v > kMaxCellBits) {
      root.fail("depth", "must be in [1, 20]");
    } else {
      cfg.depth = static_cast<int>(*v);
    }
  }
  if (uses_depth(cfg.experiment) && cfg.n * cfg.depth > kMaxCellBits) {
    root.fail("depth", "n * depth exceeds 20 (2^20 cell cap)");
  }

  cfg.level_lo = 1;
  cfg.level_hi = cfg.depth - 1;
  {
    Fields proj(root.raw("projection"), "projection", problems);
    proj.allow({"from", "to"});
    if (const auto v = proj.integer("from")) cfg.level_lo = static_cast<int>(std::clamp<std::int64_t>(*v, -1, 1 << 20));
    if (const auto v = proj.integer("to")) cfg.level_hi = static_cast<int>(std::clamp<std::int64_t>(*v, -1, 1 << 20));
    if (cfg.experiment == "k-upper" || cfg.experiment == "shift-check") {
      if (cfg.level_lo < 1) proj.fail("from", "must be >= 1 (level 0 is the rank-one average)");
      if (cfg.level_hi < cfg.level_lo || cfg.level_hi >= cfg.depth) {
        proj.fail("to", "must satisfy from <= to < depth");
      }
    }
  }

  parse_weights(root, cfg, problems);
  if (!cfg.experiment.empty()) parse_parameters(root, cfg, problems);

  {
    Fields out(root.raw("output"), "output", problems);
    out.allow({"dir", "format"});
    if (const auto v = out.string("dir")) cfg.out_dir = *v;
    if (const auto v = out.string("format")) {
      if (*v == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (*v == "json") {
        cfg.format = OutputFormat::json;
      } else if (*v == "both") {
        cfg.format = OutputFormat::both;
      } else {
        out.fail("format", "expected csv, json or both");
      }
    }
  }

  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

std::size_t required_weight_count(const RunConfig& cfg) {
  const auto& e = cfg.experiment;
  const int n = cfg.n;
  std::uint64_t count = 0;
  if (e == "rho") {
    count = cfg.count;
  } else if (e == "k-upper") {
    count = pow2(n * cfg.depth);
  } else if (e == "shift-check") {
    count = pow2(n * cfg.depth) + static_cast<std::uint64_t>(max_of(cfg.shifts));
  } else if (e == "ampliation") {
    count = 2 * pow2(n * cfg.level) * static_cast<std::uint64_t>(max_of(cfg.m_list));
  } else if (e == "scaling") {
    count = pow2(n * cfg.rel_fine);
  } else if (e == "small-set") {
    count = static_cast<std::uint64_t>(max_of(cfg.ks)) * pow2(n * cfg.rel_fine);
  } else if (e == "singular-demo") {
    switch (cfg.kind) {
      case ShrinkingKind::single:
        count = pow2(n * cfg.rel_fine);
        break;
      case ShrinkingKind::pair:
        count = 2 * pow2(n * cfg.rel_fine);
        break;
      case ShrinkingKind::constant:
        count = pow2(n * (max_of(cfg.levels) + cfg.rel_fine));
        break;
    }
  }
  return static_cast<std::size_t>(count);
}

WeightSequence build_weights(const RunConfig& cfg) {
  const auto& w = cfg.weights;
  if (w.kind == "custom") {
    return WeightSequence(w.values, w.start_index, WeightGenerator::custom);
  }
  const std::size_t count = std::max<std::size_t>(1, required_weight_count(cfg));
  if (w.kind == "harmonic") return harmonic_weights(count, w.start_index);
  const std::int64_t start =
      w.epsilon ? choose_start_index(cfg.gauge, *w.epsilon, w.m_max, w.horizon) : w.start_index;
  return build_rho(cfg.gauge, start, count);
}

RunOutput dispatch(const RunConfig& cfg, unsigned threads) {
  const auto& e = cfg.experiment;
  if (e == "gauge-check") return {run_gauge_check(cfg), std::nullopt};
  if (e == "cantor-export") return run_cantor_export(cfg);
  if (e == "rho") return {run_rho(cfg), std::nullopt};

  const auto pi = build_weights(cfg);
  RunOutput out;
  if (e == "k-upper") {
    out.result = k_upper_curve(cfg.gauge, cfg.n, pi, cfg.depth, cfg.level_lo, cfg.level_hi, threads);
  } else if (e == "ampliation") {
    out.result = ampliation_check(cfg.gauge, cfg.n, pi, cfg.depth, cfg.level, cfg.m_list,
                                  cfg.epsilon, threads);
  } else if (e == "scaling") {
    out.result = subcube_scaling_check(cfg.gauge, cfg.n, pi, cfg.word_lengths, cfg.rel_depths,
                                       cfg.rel_fine, threads);
  } else if (e == "small-set" || e == "singular-demo") {
    const auto families = families_for(cfg);
    out.result = e == "small-set"
                     ? small_set_bound_check(cfg.gauge, cfg.n, pi, families, cfg.rel_depth,
                                             cfg.rel_fine, threads)
                     : singular_demo(cfg.gauge, cfg.n, pi, families, cfg.rel_depth, cfg.rel_fine,
                                     threads);
  } else if (e == "shift-check") {
    out.result = shift_invariance_check(cfg.gauge, cfg.n, pi, cfg.depth, cfg.level_lo,
                                        cfg.level_hi, cfg.shifts, threads);
  } else {
    throw DomainError("unknown experiment '" + e + "'");
  }
  return out;
}

std::string render_json(const RunOutput& output, const RunConfig& cfg) {
  const auto& r = output.result;
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"invariant", v.invariant},
                        {"relation", v.relation},
                        {"tolerance", v.tolerance},
                        {"measured", v.measured},
                        {"slack", v.slack},
                        {"passed", v.passed},
                        {"fatal", v.fatal}});
  }
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(row);
  return dump_json({{"format_version", kFormatVersion},
                    {"experiment", r.id},
                    {"config", cfg.to_json()},
                    {"parameters", r.parameters},
                    {"columns", r.columns},
                    {"rows", rows},
                    {"verdicts", verdicts},
                    {"passed", r.passed()},
                    {"metadata", r.metadata}});
}

std::vector<std::filesystem::path> write_outputs(const RunOutput& output, const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + cfg.out_dir.string() + ": " +
                             ec.message());
  }
  std::vector<std::filesystem::path> written;
  const auto write = [&](const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << content;
    file.close();
    if (!file) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  };
  const auto base = cfg.out_dir / cfg.experiment;
  if (cfg.format != OutputFormat::json) write(base.string() + ".csv", to_csv(output.result));
  if (cfg.format != OutputFormat::csv) write(base.string() + ".json", render_json(output, cfg));
  if (output.geometry) write(base.string() + ".geometry.json", serialize_geometry(*output.geometry));
  return written;
}

}  // namespace qcm
