#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "qcm/fractal.hpp"
#include "qcm/gauge.hpp"
#include "qcm/lab.hpp"
#include "qcm/seqnorm.hpp"

namespace qcm {

inline constexpr int kFormatVersion = 1;

/// %.17g: round-trips every double.
std::string format_double(double x);

/// Serializes JSON with every floating-point number printed by format_double.
/// Object keys keep nlohmann's sorted order, so output is deterministic.
std::string dump_json(const nlohmann::json& value, int indent = 2);

nlohmann::json gauge_to_json(const GaugeSpec& g);
nlohmann::json weights_to_json(const WeightSequence& pi);
std::string_view to_string(WeightGenerator generator);

/// Geometry document: {"format_version", "dimension", "level", "records":
/// [{"word": [..], "corner": [..], "side", "measure"}]}.
std::string serialize_geometry(const GeometryDocument& doc);
/// Throws DomainError on malformed input.
GeometryDocument parse_geometry(std::string_view text);

/// Header line plus one line per row; ',' separator, LF endings.
std::string to_csv(const ExperimentResult& result);

}  // namespace qcm
