#include "polylink/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "polylink/error.hpp"
#include "polylink/io.hpp"
#include "polylink/limits.hpp"
#include "polylink/random.hpp"
#include "polylink/thresholds.hpp"

namespace polylink {

using nlohmann::json;

std::size_t k_for(const KRule& rule, std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::visit(
      [&](const auto& r) -> std::size_t {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, FixedK>) {
          return r.k;
        } else if constexpr (std::is_same_v<R, LogK>) {
          return static_cast<std::size_t>(std::ceil(r.beta * std::log(nn)));
        } else {
          return static_cast<std::size_t>(std::ceil(r.c * std::pow(nn, r.gamma)));
        }
      },
      rule);
}

BetaMode beta_mode_of(const KRule& rule) {
  if (std::holds_alternative<FixedK>(rule)) return BetaMode::finite(0.0);
  if (const auto* log_rule = std::get_if<LogK>(&rule)) return BetaMode::finite(log_rule->beta);
  return BetaMode::infinite();
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] <= n_values[i - 1]) throw ConfigError("n_values must be strictly increasing");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!want_L && !want_M) throw ConfigError("at least one of L, M must be requested");
  if (const auto* log_rule = std::get_if<LogK>(&k_rule)) {
    if (!(log_rule->beta > 0.0) || !std::isfinite(log_rule->beta)) throw ConfigError("log k rule needs 0 < beta < inf");
  }
  if (const auto* power = std::get_if<PowerK>(&k_rule)) {
    if (!(power->c > 0.0)) throw ConfigError("power k rule needs c > 0");
    if (!(power->gamma > 0.0 && power->gamma < 1.0)) throw ConfigError("power k rule needs 0 < gamma < 1");
  }
  for (auto n : n_values) {
    const auto k = k_for(k_rule, n);
    if (k < 1 || k >= n)
      throw ConfigError("k rule gives k=" + std::to_string(k) + " at n=" + std::to_string(n) + "; need 1 <= k < n");
  }
}

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig config;
  try {
    if (j.contains("polytope")) config.polytope = polytope_spec_from_json(j.at("polytope"));
    if (j.contains("density")) config.density = density_spec_from_json(j.at("density"));
    if (j.contains("k_rule")) {
      const auto& r = j.at("k_rule");
      const auto kind = r.value("kind", std::string("fixed"));
      if (kind == "fixed") config.k_rule = FixedK{r.value("k", std::size_t{1})};
      else if (kind == "log") config.k_rule = LogK{r.at("beta").get<double>()};
      else if (kind == "power") config.k_rule = PowerK{r.value("c", 1.0), r.at("gamma").get<double>()};
      else throw ConfigError("unknown k_rule kind '" + kind + "'");
    }
    config.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    config.trials = j.value("trials", std::size_t{1});
    config.master_seed = j.value("master_seed", std::uint64_t{0});
    if (j.contains("outputs")) {
      const auto outs = j.at("outputs").get<std::vector<std::string>>();
      config.want_L = std::find(outs.begin(), outs.end(), "L") != outs.end();
      config.want_M = std::find(outs.begin(), outs.end(), "M") != outs.end();
    }
    config.output_path = j.value("output", std::string());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  config.validate();
  return config;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial) {
  return derive_seed(master_seed, n, trial);
}

std::size_t resolve_thread_count(std::size_t requested) {
  std::size_t threads = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("POLYLINK_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) threads = std::min<std::size_t>(threads, cap);
  }
  return threads;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const ExperimentRow& r) {
  out << r.n << ',' << r.trial << ',' << r.seed << ',' << r.k << ',' << format_double(r.L) << ','
      << format_double(r.M) << ',' << format_double(r.nLd_log) << ',' << format_double(r.nMd_log) << ','
      << format_double(r.nLd_k) << ',' << format_double(r.nMd_k) << ',' << format_double(r.limit_const) << '\n';
}

std::vector<ExperimentRow> read_csv_rows(std::istream& in) {
  std::vector<ExperimentRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("csv: missing or unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw ConfigError("csv: expected 11 columns, got " + std::to_string(cells.size()));
    ExperimentRow r;
    r.n = std::stoull(cells[0]);
    r.trial = std::stoull(cells[1]);
    r.seed = std::stoull(cells[2]);
    r.k = std::stoull(cells[3]);
    r.L = parse_double(cells[4]);
    r.M = parse_double(cells[5]);
    r.nLd_log = parse_double(cells[6]);
    r.nMd_log = parse_double(cells[7]);
    r.nLd_k = parse_double(cells[8]);
    r.nMd_k = parse_double(cells[9]);
    r.limit_const = parse_double(cells[10]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ExperimentRow> run_convergence_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const Polytope polytope = build_polytope(config.polytope);
  const DensityModel density(config.density, polytope);
  const double constant = limit_constant(polytope, density, beta_mode_of(config.k_rule)).constant;
  const double d = polytope.dim();
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  struct Job {
    std::size_t n, trial;
  };
  std::vector<Job> jobs;
  for (auto n : config.n_values)
    for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({n, t});

  std::vector<ExperimentRow> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t i; !failed.load() && (i = next.fetch_add(1)) < jobs.size();) {
      try {
        const auto [n, trial] = jobs[i];
        ExperimentRow row;
        row.n = n;
        row.trial = trial;
        row.seed = trial_seed(config.master_seed, n, trial);
        row.k = k_for(config.k_rule, n);
        const PointCloud cloud = sample_points(polytope, density, n, row.seed);
        const auto report = compute_thresholds(cloud, row.k, config.want_L, config.want_M);
        const double nn = static_cast<double>(n);
        const double log_n = std::log(nn);
        const double kk = static_cast<double>(row.k);
        row.L = report.L.value_or(kNaN);
        row.M = report.M.value_or(kNaN);
        row.nLd_log = nn * std::pow(row.L, d) / log_n;
        row.nMd_log = nn * std::pow(row.M, d) / log_n;
        row.nLd_k = nn * std::pow(row.L, d) / kk;
        row.nMd_k = nn * std::pow(row.M, d) / kk;
        row.limit_const = constant;
        rows[i] = row;
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };

  const std::size_t threads = std::min(resolve_thread_count(options.threads), jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Rows up to the first failed or skipped job, in deterministic order.
  std::size_t done = 0;
  while (done < jobs.size() && !errors[done] && rows[done].n != 0) ++done;
  if (options.csv) {
    write_csv_header(*options.csv);
    for (std::size_t i = 0; i < done; ++i) write_csv_row(*options.csv, rows[i]);
    options.csv->flush();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace polylink
