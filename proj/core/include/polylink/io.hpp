#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "polylink/geometry.hpp"
#include "polylink/limits.hpp"
#include "polylink/sampling.hpp"
#include "polylink/thresholds.hpp"

namespace polylink {

// {"shape": "<generator>", "dim": d, ...} or {"dim": d, "vertices": [[...], ...]}.
PolytopeSpec polytope_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PolytopeSpec& spec);

// {"kind": "uniform"} | {"kind": "product", "factors": [[c0, c1, ...], ...]}
// | {"kind": "grid", "values": [...], "cells": [...]}
DensitySpec density_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DensitySpec& spec);

nlohmann::json to_json(const LimitReport& report);
nlohmann::json to_json(const ThresholdReport& report);

/// One point per row, comma separated, optional header line of non-numbers.
PointCloud read_points_csv(std::istream& in, std::string provenance = "csv");
PointCloud read_points_csv_file(const std::string& path);

nlohmann::json read_json_file(const std::string& path);

/// %.17g, with "inf" / "nan" for non-finite values.
std::string format_double(double v);
/// Parses the output of format_double.
double parse_double(const std::string& s);

}  // namespace polylink
