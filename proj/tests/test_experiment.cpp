#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "spreadlab/experiment.hpp"

using namespace spreadlab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("spreadlab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("default config text round trips") {
  const auto cfg = parse_config_text(default_config_text());
  CHECK(cfg.experiment == ExperimentKind::broadcast);
  CHECK(cfg.replicates == 100);
  CHECK(cfg.demographics.n == 1000);
  CHECK(cfg.demographics.p == 1.0);
  CHECK(cfg.truncation == 100000);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config_text(
      "experiment = passage\n"
      "replicates = 50\n"
      "master_seed = 7\n"
      "demographics.n = 200  # comment\n"
      "demographics.p = 0.25\n"
      "demographics.z0 = 1.5\n"
      "demographics.rates.kind = exponential\n"
      "demographics.rates.mean = 2\n"
      "passage.k_targets = 3\n");
  CHECK(cfg.experiment == ExperimentKind::passage);
  CHECK(cfg.replicates == 50);
  CHECK(cfg.master_seed == 7);
  CHECK(cfg.demographics.n == 200);
  CHECK(cfg.demographics.p == 0.25);
  CHECK(cfg.demographics.rates.kind == RateDistribution::Kind::exponential);
  CHECK(cfg.k_targets == 3);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("experiment = dance\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("demographics.p = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("demographics.p = nope\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("replicates = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("demographics.n = 5\ndemographics.n = 6\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("demographics.rates.kind = exponential\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text("demographics.rates.kind = point_mass\n"
                        "demographics.rates.value = 0\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/spreadlab.conf"), IoError);
}

TEST_CASE("single broadcast replicate") {
  ExperimentConfig cfg;
  cfg.demographics = {100, 0.5, 1.0, RateDistribution::point_mass(1.0)};
  cfg.replicates = 1;
  cfg.master_seed = 99;
  cfg.reference_samples = 100;
  cfg.truncation = 100;
  const auto res = run(cfg, 1);
  REQUIRE(res.table.rows.size() == 1);
  const auto& row = res.table.rows[0].values;
  CHECK(row[0] + row[1] == doctest::Approx(row[2]));  // t_half + t_half2 = t_full
}

TEST_CASE("run is deterministic and thread-count invariant") {
  ExperimentConfig cfg;
  cfg.demographics = {500, 0.3, 1.0, RateDistribution::exponential(1.0)};
  cfg.replicates = 40;
  cfg.master_seed = 5;
  cfg.reference_samples = 500;
  cfg.truncation = 200;
  const auto a = run(cfg, 1);
  const auto b = run(cfg, 4);
  REQUIRE(a.table.rows.size() == b.table.rows.size());
  for (std::size_t i = 0; i < a.table.rows.size(); ++i) {
    CHECK(a.table.rows[i].replicate == b.table.rows[i].replicate);
    CHECK(a.table.rows[i].values == b.table.rows[i].values);
  }
  CHECK(a.summary.entries == b.summary.entries);
}

TEST_CASE("slowdown summary") {
  ExperimentConfig cfg;
  cfg.demographics = {1000000, 0.01, 1.0, RateDistribution::point_mass(1.0)};
  cfg.experiment = ExperimentKind::slowdown;
  cfg.replicates = 1;
  const auto res = run(cfg, 1);
  bool found = false;
  for (const auto& [key, value] : res.summary.entries)
    if (key == "slowdown_factor") {
      found = true;
      CHECK(value == doctest::Approx(83.3333333).epsilon(1e-6));
    }
  CHECK(found);
}

TEST_CASE("emit writes csv") {
  ExperimentResult res;
  res.table.columns = {"a", "b"};
  res.summary.add("x", 1.5);

  const auto dir = temp_dir("csv");
  SUBCASE("empty rows give a header-only file") {
    emit(res, dir.string(), OutputFormat::csv);
    CHECK(read_file((dir / "results.csv").string()) == "replicate,a,b\n");
  }
  SUBCASE("three rows give four lines") {
    res.table.rows = {{0, {1.0, 2.0}}, {1, {3.0, 4.0}}, {2, {5.5, 6.5}}};
    emit(res, dir.string(), OutputFormat::csv);
    const auto text = read_file((dir / "results.csv").string());
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(text.rfind("2,5.5,6.5\n") != std::string::npos);
  }
}

TEST_CASE("emit is byte stable") {
  ExperimentConfig cfg;
  cfg.demographics = {200, 0.5, 1.0, RateDistribution::lognormal(0.0, 0.5)};
  cfg.replicates = 20;
  cfg.master_seed = 17;
  cfg.reference_samples = 200;
  cfg.truncation = 100;

  const auto dir1 = temp_dir("stable1");
  const auto dir2 = temp_dir("stable2");
  emit(run(cfg, 2), dir1.string(), OutputFormat::csv);
  emit(run(cfg, 1), dir2.string(), OutputFormat::csv);
  CHECK(read_file((dir1 / "results.csv").string()) ==
        read_file((dir2 / "results.csv").string()));
  CHECK(read_file((dir1 / "summary.json").string()) ==
        read_file((dir2 / "summary.json").string()));
}

TEST_CASE("jsonl rows parse back") {
  ExperimentConfig cfg;
  cfg.demographics = {50, 1.0, 1.0, RateDistribution::point_mass(1.0)};
  cfg.experiment = ExperimentKind::yule;
  cfg.yule_m = 5;
  cfg.replicates = 3;
  const auto dir = temp_dir("jsonl");
  emit(run(cfg, 1), dir.string(), OutputFormat::jsonl);

  std::ifstream in((dir / "results.jsonl").string());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto obj = nlohmann::json::parse(line);
    CHECK(obj.contains("replicate"));
    CHECK(obj.contains("t_hat_m"));
    ++rows;
  }
  CHECK(rows == 3);

  const auto summary = nlohmann::json::parse(read_file((dir / "summary.json").string()));
  CHECK(summary.contains("ks_t_hat_m_vs_ref"));
}

TEST_CASE("oracle experiment ks stays small") {
  ExperimentConfig cfg;
  cfg.demographics = {10, 0.5, 1.0, RateDistribution::exponential(1.0)};
  cfg.experiment = ExperimentKind::oracle;
  cfg.replicates = 5000;
  cfg.master_seed = 3;
  const auto res = run(cfg, 0);
  for (const auto& [key, value] : res.summary.entries)
    if (key == "ks_t_full" || key == "ks_t_half") CHECK(value < 0.04);
}
