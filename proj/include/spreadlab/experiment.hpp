#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spreadlab/demographics.hpp"

namespace spreadlab {

enum class ExperimentKind { broadcast, passage, curve, slowdown, oracle, yule, limits };
enum class OutputFormat { csv, jsonl };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Demographics demographics{1000, 1.0, 1.0, RateDistribution::point_mass(1.0)};
  ExperimentKind experiment = ExperimentKind::broadcast;
  std::uint64_t replicates = 100;
  std::uint64_t master_seed = 0;

  std::size_t k_targets = 1;  // passage
  double grid_lo = -8.0;      // curve
  double grid_hi = 8.0;
  double grid_step = 0.1;
  std::size_t truncation = 100000;         // V-series truncation
  std::size_t reference_samples = 100000;  // limit-law draws for summary KS
  std::size_t yule_m = 50;                 // yule
};

struct ResultRow {
  std::uint64_t replicate;
  std::vector<double> values;
};

struct ResultTable {
  std::vector<std::string> columns;  // without the leading replicate column
  std::vector<ResultRow> rows;
};

// Ordered so serialization is byte-stable.
struct Summary {
  std::vector<std::pair<std::string, double>> entries;
  void add(std::string key, double value) { entries.emplace_back(std::move(key), value); }
};

struct ExperimentResult {
  ResultTable table;
  Summary summary;
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

ExperimentConfig parse_config_text(const std::string& text);  // throws ConfigError
ExperimentConfig parse_config_file(const std::string& path);  // throws ConfigError/IoError
std::string default_config_text();

ExperimentResult run(const ExperimentConfig& cfg, unsigned threads);

// Writes <out_dir>/results.csv (or .jsonl) and <out_dir>/summary.json;
// byte-stable given identical inputs.
void emit(const ExperimentResult& result, const std::string& out_dir, OutputFormat format);

}  // namespace spreadlab
