#include "qcm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qcm/error.hpp"

namespace qcm {

namespace {

void emit(const nlohmann::json& v, int indent, int level, std::string& out) {
  const auto newline = [&](int lvl) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += nlohmann::json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        emit(it.value(), indent, level + 1, out);
      }
      newline(level);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(v.begin(), v.end(), [](const nlohmann::json& e) {
        return e.is_structured();
      });
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(level + 1);
        emit(e, indent, level + 1, out);
      }
      if (!flat) newline(level);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

[[noreturn]] void malformed(const std::string& what) {
  throw DomainError("malformed geometry document: " + what);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const nlohmann::json& value, int indent) {
  std::string out;
  emit(value, indent, 0, out);
  out += '\n';
  return out;
}

nlohmann::json gauge_to_json(const GaugeSpec& g) {
  nlohmann::json j = {{"family", std::string(to_string(g.family))}, {"s", g.s}};
  if (g.family == GaugeFamily::power_log) j["beta"] = g.beta;
  return j;
}

std::string_view to_string(WeightGenerator generator) {
  switch (generator) {
    case WeightGenerator::rho_of_gauge:
      return "rho";
    case WeightGenerator::harmonic:
      return "harmonic";
    case WeightGenerator::custom:
      return "custom";
  }
  return "custom";
}

nlohmann::json weights_to_json(const WeightSequence& pi) {
  nlohmann::json j = {{"kind", std::string(to_string(pi.generator()))},
                      {"start_index", pi.start_index()},
                      {"count", pi.size()},
                      {"first", pi[0]},
                      {"last", pi[pi.size() - 1]},
                      {"known_divergent", pi.known_divergent()}};
  if (pi.gauge()) j["gauge"] = gauge_to_json(*pi.gauge());
  return j;
}

std::string serialize_geometry(const GeometryDocument& doc) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : doc.records) {
    records.push_back({{"word", r.word.letters()},
                       {"corner", r.corner},
                       {"side", r.side},
                       {"measure", r.measure}});
  }
  return dump_json({{"format_version", kFormatVersion},
                    {"dimension", doc.dimension},
                    {"level", doc.level},
                    {"records", records}});
}

GeometryDocument parse_geometry(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) malformed("unsupported format_version");
    GeometryDocument doc;
    doc.dimension = j.at("dimension").get<int>();
    doc.level = j.at("level").get<int>();
    for (const auto& r : j.at("records")) {
      GeometryRecord rec{Word(doc.dimension, r.at("word").get<std::vector<std::uint32_t>>()),
                         r.at("corner").get<std::vector<double>>(), r.at("side").get<double>(),
                         r.at("measure").get<double>()};
      if (static_cast<int>(rec.word.size()) != doc.level ||
          static_cast<int>(rec.corner.size()) != doc.dimension) {
        malformed("record shape does not match dimension/level");
      }
      doc.records.push_back(std::move(rec));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
}

std::string to_csv(const ExperimentResult& result) {
  std::string out;
  for (std::size_t i = 0; i < result.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += result.columns[i];
  }
  out += '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace qcm
