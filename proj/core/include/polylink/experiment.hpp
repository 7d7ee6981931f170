#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "polylink/geometry.hpp"
#include "polylink/sampling.hpp"
#include "polylink/theory.hpp"

namespace polylink {

struct FixedK {
  std::size_t k = 1;
};
/// k(n) = ceil(beta log n); beta < inf regime.
struct LogK {
  double beta = 1.0;
};
/// k(n) = ceil(c n^gamma), 0 < gamma < 1; beta = inf regime.
struct PowerK {
  double c = 1.0;
  double gamma = 0.5;
};
using KRule = std::variant<FixedK, LogK, PowerK>;

std::size_t k_for(const KRule& rule, std::size_t n);
/// beta = 0 for a fixed k, beta for the log rule, infinite for the power rule.
BetaMode beta_mode_of(const KRule& rule);

struct ExperimentConfig {
  PolytopeSpec polytope = PolytopeSpec::hypercube(2);
  DensitySpec density = DensitySpec::uniform();
  KRule k_rule = FixedK{1};
  std::vector<std::size_t> n_values;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  bool want_L = true;
  bool want_M = true;
  std::string output_path;  // empty: stdout

  /// Throws ConfigError when an invariant fails.
  void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  double L = 0.0;  // NaN when not requested
  double M = 0.0;
  double nLd_log = 0.0;
  double nMd_log = 0.0;
  double nLd_k = 0.0;
  double nMd_k = 0.0;
  double limit_const = 0.0;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

/// Column order of the CSV output.
inline constexpr const char* kCsvHeader = "n,trial,seed,k,L,M,nLd_log,nMd_log,nLd_k,nMd_k,limit_const";

/// Seed of the cloud for (n, trial); depends on nothing else.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial);

struct RunOptions {
  std::size_t threads = 0;  // 0: hardware concurrency capped by POLYLINK_THREADS
  std::ostream* csv = nullptr;  // rows written in (n, trial) order, header first
};

/// Samples a cloud per (n, trial) and records the normalized thresholds
/// alongside the theoretical constant. On failure, the rows preceding the
/// first failed job are written before the exception propagates.
std::vector<ExperimentRow> run_convergence_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Threads to use when the caller asks for `requested` (0 = automatic).
std::size_t resolve_thread_count(std::size_t requested);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ExperimentRow& row);
std::vector<ExperimentRow> read_csv_rows(std::istream& in);

}  // namespace polylink
