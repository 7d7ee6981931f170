#include "polylink/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "polylink/error.hpp"

namespace polylink {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

PolytopeSpec polytope_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("polytope spec must be a JSON object");
  PolytopeSpec spec;
  if (j.contains("vertices")) {
    spec = PolytopeSpec::from_vertices(get_or<int>(j, "dim", 0), get_or<std::vector<Point>>(j, "vertices", {}));
    if (spec.dim == 0 && !spec.vertices.empty()) spec.dim = static_cast<int>(spec.vertices.front().size());
  } else {
    const auto shape = get_or<std::string>(j, "shape", "");
    const int dim = get_or<int>(j, "dim", 0);
    if (shape == "hypercube" || shape == "cube") {
      spec = PolytopeSpec::hypercube(dim);
    } else if (shape == "box") {
      spec = PolytopeSpec::box(get_or<std::vector<double>>(j, "sides", {}));
      if (dim != 0 && dim != spec.dim) throw ConfigError("box: dim does not match the number of sides");
    } else if (shape == "simplex") {
      spec = PolytopeSpec::simplex(dim, get_or<bool>(j, "regular", false));
    } else if (shape == "regular_simplex") {
      spec = PolytopeSpec::simplex(dim, true);
    } else if (shape == "cross_polytope") {
      spec = PolytopeSpec::cross_polytope(dim);
    } else if (shape == "regular_polygon") {
      spec = PolytopeSpec::regular_polygon(get_or<int>(j, "m", 0));
      if (dim != 0 && dim != 2) throw ConfigError("regular_polygon: dim must be 2");
    } else {
      throw ConfigError("unknown polytope shape '" + shape + "'");
    }
  }
  spec.scale = get_or<double>(j, "scale", 1.0);
  spec.mc_samples = get_or<std::size_t>(j, "mc_samples", spec.mc_samples);
  spec.mc_seed = get_or<std::uint64_t>(j, "mc_seed", spec.mc_seed);
  return spec;
}

json to_json(const PolytopeSpec& spec) {
  json j;
  if (spec.shape == ShapeKind::explicit_vertices) {
    j["dim"] = spec.dim;
    j["vertices"] = spec.vertices;
  } else {
    j["shape"] = to_string(spec.shape);
    j["dim"] = spec.dim;
    if (spec.shape == ShapeKind::box) j["sides"] = spec.sides;
    if (spec.shape == ShapeKind::regular_polygon) j["m"] = spec.polygon_vertices;
    if (spec.shape == ShapeKind::simplex && spec.regular) j["regular"] = true;
  }
  if (spec.scale != 1.0) j["scale"] = spec.scale;
  return j;
}

DensitySpec density_spec_from_json(const json& j) {
  if (j.is_string()) return density_spec_from_json(json{{"kind", j.get<std::string>()}});
  if (!j.is_object()) throw ConfigError("density spec must be a JSON object");
  const auto kind = get_or<std::string>(j, "kind", "uniform");
  DensitySpec spec;
  if (kind == "uniform") {
    spec = DensitySpec::uniform();
  } else if (kind == "product") {
    spec = DensitySpec::product(get_or<std::vector<std::vector<double>>>(j, "factors", {}));
  } else if (kind == "grid") {
    spec = DensitySpec::grid(get_or<std::vector<double>>(j, "values", {}),
                             get_or<std::vector<std::size_t>>(j, "cells", {}));
  } else {
    throw ConfigError("unknown density kind '" + kind + "'");
  }
  spec.normalizer_samples = get_or<std::size_t>(j, "normalizer_samples", spec.normalizer_samples);
  spec.probe_points = get_or<std::size_t>(j, "probe_points", spec.probe_points);
  spec.seed = get_or<std::uint64_t>(j, "seed", spec.seed);
  return spec;
}

json to_json(const DensitySpec& spec) {
  json j{{"kind", to_string(spec.kind)}};
  if (spec.kind == DensityKind::product) j["factors"] = spec.factors;
  if (spec.kind == DensityKind::grid) {
    j["values"] = spec.values;
    j["cells"] = spec.cells;
  }
  return j;
}

json to_json(const LimitReport& report) {
  json faces = json::array();
  for (const auto& c : report.per_face) {
    faces.push_back({{"face_id", c.face_id},
                     {"dimension", c.dimension},
                     {"rho", c.rho},
                     {"f", c.f},
                     {"f_estimated", c.f_estimated},
                     {"contribution", c.contribution}});
  }
  json j;
  j["beta"] = report.beta.is_infinite() ? json("inf") : json(report.beta.value());
  j["normalization"] = report.normalization;
  j["constant"] = report.constant;
  j["argmax_faces"] = report.argmax_faces;
  j["per_face"] = std::move(faces);
  return j;
}

json to_json(const ThresholdReport& report) {
  json j;
  j["n"] = report.n;
  j["k"] = report.k;
  j["L"] = report.L ? number_or_string(*report.L) : json(nullptr);
  j["M"] = report.M ? number_or_string(*report.M) : json(nullptr);
  j["witness_L"] = report.witness_L ? json(*report.witness_L) : json(nullptr);
  j["elapsed"] = report.elapsed_seconds;
  return j;
}

PointCloud read_points_csv(std::istream& in, std::string provenance) {
  std::vector<double> coords;
  int dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (coords.empty() && dim == 0) continue;  // header
      throw ConfigError("points csv line " + std::to_string(line_no) + ": non-numeric value");
    }
    if (dim == 0) dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != dim)
      throw ConfigError("points csv line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                        " columns, got " + std::to_string(row.size()));
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) throw ConfigError("points csv contains no points");
  return PointCloud(dim, std::move(coords), 0, std::move(provenance));
}

PointCloud read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open points file '" + path + "'");
  return read_points_csv(in, path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open json file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid json in '" + path + "': " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

}  // namespace polylink
