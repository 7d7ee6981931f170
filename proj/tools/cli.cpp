#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "polylink/error.hpp"
#include "polylink/experiment.hpp"
#include "polylink/io.hpp"
#include "polylink/limits.hpp"
#include "polylink/thresholds.hpp"

namespace polylink::cli {

namespace {

using nlohmann::json;

struct ShapeArgs {
  std::string shape = "hypercube";
  int dim = 2;
  std::vector<double> sides;
  int m = 0;
  bool regular = false;
  double scale = 1.0;
  std::string polytope_file;
  std::size_t mc_samples = 1'000'000;

  PolytopeSpec spec() const {
    if (!polytope_file.empty()) return polytope_spec_from_json(read_json_file(polytope_file));
    json j{{"shape", shape}, {"dim", dim}, {"scale", scale}, {"mc_samples", mc_samples}};
    if (shape == "box") {
      j["sides"] = sides;
      j.erase("dim");
    }
    if (shape == "regular_polygon") {
      j["m"] = m;
      j.erase("dim");
    }
    if (regular) j["regular"] = true;
    return polytope_spec_from_json(j);
  }
};

struct DensityArgs {
  std::string density = "uniform";  // kind name or inline JSON
  std::string density_file;

  DensitySpec spec() const {
    if (!density_file.empty()) return density_spec_from_json(read_json_file(density_file));
    if (!density.empty() && density.front() == '{') {
      try {
        return density_spec_from_json(json::parse(density));
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("--density: ") + e.what());
      }
    }
    return density_spec_from_json(json{{"kind", density}});
  }
};

void add_shape_options(CLI::App* app, ShapeArgs& a) {
  app->add_option("--shape", a.shape, "Builtin polytope generator")
      ->check(CLI::IsMember({"hypercube", "cube", "box", "simplex", "regular_simplex", "cross_polytope",
                             "regular_polygon"}));
  app->add_option("--dim", a.dim, "Dimension d")->check(CLI::Range(1, 12));
  app->add_option("--sides", a.sides, "Side lengths for --shape box");
  app->add_option("--m", a.m, "Vertex count for --shape regular_polygon");
  app->add_flag("--regular", a.regular, "Regular simplex instead of the corner simplex");
  app->add_option("--scale", a.scale, "Dilation factor");
  app->add_option("--polytope", a.polytope_file, "Polytope spec JSON file (overrides --shape)");
  app->add_option("--mc-samples", a.mc_samples, "Monte Carlo samples for non-closed-form angular volumes");
}

void add_density_options(CLI::App* app, DensityArgs& a) {
  app->add_option("--density", a.density, "uniform, or an inline density JSON object");
  app->add_option("--density-file", a.density_file, "Density spec JSON file");
}

BetaMode parse_beta(const std::string& text) {
  if (text == "inf" || text == "infinity") return BetaMode::infinite();
  try {
    std::size_t used = 0;
    const double b = std::stod(text, &used);
    if (used != text.size()) throw ConfigError("");
    return BetaMode::finite(b);
  } catch (const std::exception&) {
    throw ConfigError("--beta must be a non-negative number or 'inf' (got '" + text + "')");
  }
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      const double v = std::stod(cell);  // accepts 1e5
      if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) throw ConfigError("");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("--n-values: not a count: '" + cell + "'");
    }
  }
  return out;
}

int run_limit(const ShapeArgs& shape, const DensityArgs& dens, const std::string& beta_text,
              const std::string& formula, std::ostream& out) {
  const auto poly = build_polytope(shape.spec());
  const DensityModel density(dens.spec(), poly);
  const BetaMode beta = parse_beta(beta_text);
  LimitReport report;
  if (formula == "general") {
    report = limit_constant(poly, density, beta);
  } else {
    if (beta.is_infinite()) throw ConfigError("--formula " + formula + " requires a finite --beta");
    if (formula == "polygon") report = limit_constant_polygon(poly, density, beta.value());
    else if (formula == "polyhedron") report = limit_constant_polyhedron(poly, density, beta.value());
    else report = limit_constant_hypercube(poly, density, beta.value());
  }
  json j = to_json(report);
  j["polytope"] = poly.name();
  j["density"] = to_json(density.spec());
  j["formula"] = formula;
  out << j.dump(2) << '\n';
  return 0;
}

int run_simulate(const ShapeArgs& shape, const DensityArgs& dens, std::size_t n, std::size_t k, std::uint64_t seed,
                 const std::string& points_file, const std::vector<std::string>& outputs, std::ostream& out) {
  PointCloud cloud;
  std::string source;
  if (!points_file.empty()) {
    cloud = read_points_csv_file(points_file);
    source = points_file;
  } else {
    const auto poly = build_polytope(shape.spec());
    const DensityModel density(dens.spec(), poly);
    cloud = sample_points(poly, density, n, seed);
    source = poly.name();
  }
  const bool want_L = std::find(outputs.begin(), outputs.end(), "L") != outputs.end();
  const bool want_M = std::find(outputs.begin(), outputs.end(), "M") != outputs.end();
  const auto report = compute_thresholds(cloud, k, want_L, want_M);
  json j = to_json(report);
  j["dim"] = cloud.dim();
  j["source"] = source;
  if (points_file.empty()) j["seed"] = seed;
  out << j.dump(2) << '\n';
  return 0;
}

int run_faces(const ShapeArgs& shape, std::ostream& out) {
  const auto poly = build_polytope(shape.spec());
  out << "id,dimension,vertex_ids,rho,method\n";
  for (const auto& f : poly.faces()) {
    out << f.id << ',' << f.dimension << ',';
    for (std::size_t i = 0; i < f.vertex_ids.size(); ++i) out << (i ? " " : "") << f.vertex_ids[i];
    out << ',' << format_double(f.angular_volume) << ',' << to_string(f.rho_method) << '\n';
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Largest k-nearest-neighbour link and k-connectivity thresholds in convex polytopes", "polylink"};
  app.require_subcommand(1);

  ShapeArgs shape;
  DensityArgs dens;

  auto* limit = app.add_subcommand("limit", "Limit constant of n L^d / log n (or / k(n)) per face");
  std::string beta_text = "0";
  std::string formula = "general";
  add_shape_options(limit, shape);
  add_density_options(limit, dens);
  limit->add_option("--beta", beta_text, "beta = lim k(n)/log n, or 'inf'");
  limit->add_option("--formula", formula, "general, polygon, polyhedron or hypercube")
      ->check(CLI::IsMember({"general", "polygon", "polyhedron", "hypercube"}));

  auto* simulate = app.add_subcommand("simulate", "Sample one cloud (or load one) and compute L and M");
  std::size_t n = 1000, k = 1;
  std::uint64_t seed = 0;
  std::string points_file;
  std::vector<std::string> outputs{"L", "M"};
  add_shape_options(simulate, shape);
  add_density_options(simulate, dens);
  simulate->add_option("--n", n, "Number of points")->check(CLI::PositiveNumber);
  simulate->add_option("--k", k, "k")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Sampling seed");
  simulate->add_option("--points", points_file, "CSV point cloud (one point per row) instead of sampling");
  simulate->add_option("--outputs", outputs, "Thresholds to compute")->check(CLI::IsMember({"L", "M"}))->delimiter(',');

  auto* converge = app.add_subcommand("converge", "Convergence sweep over n and trials, CSV output");
  std::string config_file, n_values_text, out_path;
  std::size_t trials = 1, fixed_k = 1, threads = 0;
  std::uint64_t master_seed = 0;
  double k_beta = 0.0, k_c = 1.0, k_gamma = 0.0;
  std::vector<std::string> conv_outputs{"L", "M"};
  add_shape_options(converge, shape);
  add_density_options(converge, dens);
  converge->add_option("--config", config_file, "Experiment config JSON (overrides the flags below)");
  converge->add_option("--n-values", n_values_text, "Comma-separated sample sizes, e.g. 1000,10000");
  converge->add_option("--trials", trials, "Trials per n")->check(CLI::PositiveNumber);
  converge->add_option("--seed", master_seed, "Master seed");
  converge->add_option("--k", fixed_k, "Fixed k")->check(CLI::PositiveNumber);
  converge->add_option("--k-beta", k_beta, "k(n) = ceil(beta log n)");
  converge->add_option("--k-gamma", k_gamma, "k(n) = ceil(c n^gamma), 0 < gamma < 1");
  converge->add_option("--k-c", k_c, "c for --k-gamma");
  converge->add_option("--outputs", conv_outputs, "Thresholds to compute")
      ->check(CLI::IsMember({"L", "M"}))
      ->delimiter(',');
  converge->add_option("--out", out_path, "CSV output path (default stdout)");
  converge->add_option("--threads", threads, "Worker threads (0 = automatic, capped by POLYLINK_THREADS)");

  auto* faces = app.add_subcommand("faces", "Dump the face lattice with angular volumes");
  add_shape_options(faces, shape);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (limit->parsed()) return run_limit(shape, dens, beta_text, formula, out);
    if (simulate->parsed()) return run_simulate(shape, dens, n, k, seed, points_file, outputs, out);
    if (faces->parsed()) return run_faces(shape, out);
    if (converge->parsed()) {
      ExperimentConfig config;
      if (!config_file.empty()) {
        config = experiment_config_from_json(read_json_file(config_file));
      } else {
        config.polytope = shape.spec();
        config.density = dens.spec();
        if (converge->count("--k-beta")) config.k_rule = LogK{k_beta};
        else if (converge->count("--k-gamma")) config.k_rule = PowerK{k_c, k_gamma};
        else config.k_rule = FixedK{fixed_k};
        config.n_values = parse_list(n_values_text);
        config.trials = trials;
        config.master_seed = master_seed;
        config.want_L = std::find(conv_outputs.begin(), conv_outputs.end(), "L") != conv_outputs.end();
        config.want_M = std::find(conv_outputs.begin(), conv_outputs.end(), "M") != conv_outputs.end();
        config.validate();
      }
      if (!out_path.empty()) config.output_path = out_path;
      RunOptions options;
      options.threads = threads;
      std::ofstream file;
      if (!config.output_path.empty()) {
        file.open(config.output_path);
        if (!file) throw ConfigError("cannot write '" + config.output_path + "'");
        options.csv = &file;
      } else {
        options.csv = &out;
      }
      run_convergence_experiment(config, options);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace polylink::cli
