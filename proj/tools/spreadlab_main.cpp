#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spreadlab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spreadlab - Monte Carlo laboratory for heterogeneous rumor spreading"};

  std::string config_path;
  std::string out_dir = ".";
  std::string format_name = "csv";
  long long seed_override = -1;
  long long replicates_override = -1;
  unsigned threads = 0;
  bool print_config = false;

  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--seed", seed_override, "master seed (overrides config)");
  app.add_option("--replicates", replicates_override, "replicate count (overrides config)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--format", format_name, "output format: csv|jsonl")->capture_default_str();
  app.add_option("--threads", threads, "worker threads, 0 = auto")->capture_default_str();
  app.add_flag("--print-config", print_config, "print the default config and exit");

  CLI11_PARSE(app, argc, argv);

  if (print_config) {
    std::cout << spreadlab::default_config_text();
    return 0;
  }

  spreadlab::OutputFormat format;
  if (format_name == "csv") format = spreadlab::OutputFormat::csv;
  else if (format_name == "jsonl") format = spreadlab::OutputFormat::jsonl;
  else {
    std::cerr << "error: unknown format '" << format_name << "'\n";
    return 2;
  }

  if (config_path.empty()) {
    std::cerr << "error: --config is required (or use --print-config)\n";
    return 2;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("SPREADLAB_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end && *end == '\0' && v >= 0) threads = static_cast<unsigned>(v);
    }
  }

  try {
    spreadlab::ExperimentConfig cfg = spreadlab::parse_config_file(config_path);
    if (seed_override >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed_override);
    if (replicates_override >= 0) {
      if (replicates_override < 1) throw spreadlab::ConfigError("replicates must be >= 1");
      cfg.replicates = static_cast<std::uint64_t>(replicates_override);
    }

    const spreadlab::ExperimentResult result = spreadlab::run(cfg, threads);
    spreadlab::emit(result, out_dir, format);

    std::cout << "experiment: " << spreadlab::experiment_kind_name(cfg.experiment)
              << "  replicates: " << cfg.replicates
              << "  seed: " << cfg.master_seed << "\n";
    for (const auto& [key, value] : result.summary.entries)
      std::cout << "  " << key << " = " << value << "\n";
  } catch (const spreadlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const spreadlab::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
