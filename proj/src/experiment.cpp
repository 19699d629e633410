#include "spreadlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "spreadlab/asymptotics.hpp"
#include "spreadlab/engine.hpp"
#include "spreadlab/parallel.hpp"
#include "spreadlab/rng.hpp"
#include "spreadlab/stats.hpp"

namespace spreadlab {

namespace {

constexpr std::uint64_t kReferenceReplicate = ~0ULL;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("invalid number for " + key + ": '" + value + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("invalid integer for " + key + ": '" + value + "'");
  }
}

RateDistribution build_rates(const std::map<std::string, std::string>& kv) {
  const bool any = std::any_of(kv.begin(), kv.end(), [](const auto& e) {
    return e.first.rfind("demographics.rates.", 0) == 0;
  });
  if (!any) return RateDistribution::point_mass(1.0);
  auto get = [&](const char* key) -> double {
    auto it = kv.find(std::string("demographics.rates.") + key);
    if (it == kv.end())
      throw ConfigError(std::string("missing demographics.rates.") + key);
    return to_double(it->first, it->second);
  };
  auto it = kv.find("demographics.rates.kind");
  const std::string kind = it == kv.end() ? "point_mass" : it->second;
  if (kind == "point_mass") return RateDistribution::point_mass(get("value"));
  if (kind == "exponential") return RateDistribution::exponential(get("mean"));
  if (kind == "uniform") return RateDistribution::uniform(get("lo"), get("hi"));
  if (kind == "lognormal") return RateDistribution::lognormal(get("mu"), get("sigma"));
  if (kind == "two_point")
    return RateDistribution::two_point(get("value_a"), get("prob_a"), get("value_b"));
  throw ConfigError("unknown rate distribution kind: '" + kind + "'");
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "broadcast") return ExperimentKind::broadcast;
  if (name == "passage") return ExperimentKind::passage;
  if (name == "curve") return ExperimentKind::curve;
  if (name == "slowdown") return ExperimentKind::slowdown;
  if (name == "oracle") return ExperimentKind::oracle;
  if (name == "yule") return ExperimentKind::yule;
  if (name == "limits") return ExperimentKind::limits;
  throw ConfigError("unknown experiment: '" + name + "'");
}

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::broadcast: return "broadcast";
    case ExperimentKind::passage: return "passage";
    case ExperimentKind::curve: return "curve";
    case ExperimentKind::slowdown: return "slowdown";
    case ExperimentKind::oracle: return "oracle";
    case ExperimentKind::yule: return "yule";
    case ExperimentKind::limits: return "limits";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("duplicate key: " + key);
  }

  ExperimentConfig cfg;
  cfg.demographics.rates = build_rates(kv);
  for (const auto& [key, value] : kv) {
    if (key == "experiment") cfg.experiment = parse_experiment_kind(value);
    else if (key == "replicates") cfg.replicates = to_uint(key, value);
    else if (key == "master_seed") cfg.master_seed = to_uint(key, value);
    else if (key == "demographics.n") cfg.demographics.n = to_uint(key, value);
    else if (key == "demographics.p") cfg.demographics.p = to_double(key, value);
    else if (key == "demographics.z0") cfg.demographics.z0 = to_double(key, value);
    else if (key == "passage.k_targets") cfg.k_targets = to_uint(key, value);
    else if (key == "curve.grid_lo") cfg.grid_lo = to_double(key, value);
    else if (key == "curve.grid_hi") cfg.grid_hi = to_double(key, value);
    else if (key == "curve.grid_step") cfg.grid_step = to_double(key, value);
    else if (key == "limits.truncation") cfg.truncation = to_uint(key, value);
    else if (key == "limits.reference_samples") cfg.reference_samples = to_uint(key, value);
    else if (key == "yule.m") cfg.yule_m = to_uint(key, value);
    else if (key.rfind("demographics.rates.", 0) == 0) continue;  // consumed above
    else throw ConfigError("unknown key: " + key);
  }

  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (cfg.grid_step <= 0.0 || cfg.grid_hi < cfg.grid_lo)
    throw ConfigError("invalid curve grid");
  if (cfg.truncation < 1) throw ConfigError("limits.truncation must be >= 1");
  if (cfg.yule_m < 1) throw ConfigError("yule.m must be >= 1");
  try {
    validate(cfg.demographics);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("demographics: ") + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string default_config_text() {
  const ExperimentConfig cfg;
  std::ostringstream out;
  out << "experiment = " << experiment_kind_name(cfg.experiment) << "\n"
      << "replicates = " << cfg.replicates << "\n"
      << "master_seed = " << cfg.master_seed << "\n"
      << "demographics.n = " << cfg.demographics.n << "\n"
      << "demographics.p = " << cfg.demographics.p << "\n"
      << "demographics.z0 = " << cfg.demographics.z0 << "\n"
      << "demographics.rates.kind = point_mass\n"
      << "demographics.rates.value = 1\n"
      << "# per-kind parameters: point_mass: value; exponential: mean;\n"
      << "# uniform: lo hi; lognormal: mu sigma; two_point: value_a prob_a value_b\n"
      << "passage.k_targets = " << cfg.k_targets << "\n"
      << "curve.grid_lo = " << cfg.grid_lo << "\n"
      << "curve.grid_hi = " << cfg.grid_hi << "\n"
      << "curve.grid_step = " << cfg.grid_step << "\n"
      << "limits.truncation = " << cfg.truncation << "\n"
      << "limits.reference_samples = " << cfg.reference_samples << "\n"
      << "yule.m = " << cfg.yule_m << "\n";
  return out.str();
}

namespace {

struct RunContext {
  const ExperimentConfig& cfg;
  double lambda;
  unsigned threads;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double correlation_of(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> column(const ResultTable& table, std::size_t idx) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) out.push_back(row.values[idx]);
  return out;
}

VSamplerConfig v_sampler_config(const ExperimentConfig& cfg) {
  return {cfg.demographics.z0, cfg.demographics.rates, cfg.truncation};
}

std::vector<double> reference_draws(const RunContext& ctx, LimitLaw law) {
  const VSamplerConfig vcfg = v_sampler_config(ctx.cfg);
  std::vector<double> draws(ctx.cfg.reference_samples);
  // Chunked so the reference set is deterministic yet parallelizable.
  const std::uint64_t chunk = 1024;
  const std::uint64_t chunks = (draws.size() + chunk - 1) / chunk;
  parallel_replicates(chunks, ctx.threads, [&](std::uint64_t c) {
    auto rng = make_stream(ctx.cfg.master_seed, kReferenceReplicate - c, StreamRole::limits);
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, draws.size());
    for (std::uint64_t i = lo; i < hi; ++i) {
      switch (law) {
        case LimitLaw::v: draws[i] = sample_v(vcfg, rng); break;
        case LimitLaw::gumbel: draws[i] = gumbel_sample(rng); break;
        case LimitLaw::logistic: draws[i] = logistic_sample(rng); break;
        case LimitLaw::v_plus_gumbel: draws[i] = sample_limit_broadcast(vcfg, rng); break;
        case LimitLaw::v_plus_logistic: draws[i] = sample_limit_passage(vcfg, rng); break;
      }
    }
  });
  return draws;
}

ExperimentResult run_broadcast(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const double n = static_cast<double>(cfg.demographics.n);
  const double p = cfg.demographics.p;
  const double lp = ctx.lambda * p;
  const double log_pn = std::log(p * n);
  const double log_n = std::log(n);

  ExperimentResult res;
  res.table.columns = {"t_half", "t_half2", "t_full",
                       "norm_half", "norm_half2", "norm_full"};
  res.table.rows.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, ctx.threads, [&](std::uint64_t r) {
    auto pop_rng = make_stream(cfg.master_seed, r, StreamRole::population);
    auto sched_rng = make_stream(cfg.master_seed, r, StreamRole::schedule);
    const auto pop = sample_population(cfg.demographics, pop_rng);
    const auto sched = simulate_schedule(cfg.demographics, pop, sched_rng);
    const auto bs = broadcast_summary(sched);
    res.table.rows[r] = {r, {bs.t_half, bs.t_half2, bs.t_full,
                             lp * bs.t_half - log_pn,
                             lp * bs.t_half2 - log_n,
                             lp * bs.t_full - log_pn - log_n}};
  });

  const auto norm_full = column(res.table, 5);
  const auto ref = reference_draws(ctx, LimitLaw::v_plus_gumbel);
  const double ks = ks_two_sample(Ecdf::from_samples(norm_full),
                                  Ecdf::from_samples(ref));
  res.summary.add("mean_norm_half", mean_of(column(res.table, 3)));
  res.summary.add("mean_norm_half2", mean_of(column(res.table, 4)));
  res.summary.add("mean_norm_full", mean_of(norm_full));
  if (cfg.replicates > 1) res.summary.add("var_norm_full", variance_of(norm_full));
  res.summary.add("ref_mean_limit", mean_of(ref));
  res.summary.add("ks_norm_full_vs_limit", ks);
  return res;
}

ExperimentResult run_passage(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const std::size_t k = cfg.k_targets;
  if (k < 1 || k > cfg.demographics.n)
    throw ConfigError("passage.k_targets must be in [1, n]");
  const double n = static_cast<double>(cfg.demographics.n);
  const double p = cfg.demographics.p;
  const double lp = ctx.lambda * p;
  const double log_pn = std::log(p * n);

  ExperimentResult res;
  for (std::size_t i = 1; i <= k; ++i)
    res.table.columns.push_back("tau_" + std::to_string(i));
  for (std::size_t i = 1; i <= k; ++i)
    res.table.columns.push_back("norm_tau_" + std::to_string(i));
  res.table.rows.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, ctx.threads, [&](std::uint64_t r) {
    auto pop_rng = make_stream(cfg.master_seed, r, StreamRole::population);
    auto sched_rng = make_stream(cfg.master_seed, r, StreamRole::schedule);
    auto rank_rng = make_stream(cfg.master_seed, r, StreamRole::ranks);
    const auto pop = sample_population(cfg.demographics, pop_rng);
    const auto sched = simulate_schedule(cfg.demographics, pop, sched_rng);
    const auto pt = passage_times(sched, k, rank_rng);
    std::vector<double> values;
    values.reserve(2 * k);
    for (double tau : pt.taus) values.push_back(tau);
    for (double tau : pt.taus) values.push_back(lp * tau - log_pn);
    res.table.rows[r] = {r, std::move(values)};
  });

  const auto norm1 = column(res.table, k);
  const auto ref = reference_draws(ctx, LimitLaw::v_plus_logistic);
  res.summary.add("mean_norm_tau_1", mean_of(norm1));
  res.summary.add("ks_norm_tau_1_vs_limit",
                  ks_two_sample(Ecdf::from_samples(norm1), Ecdf::from_samples(ref)));
  if (k >= 2 && cfg.replicates > 1)
    res.summary.add("corr_norm_tau_12", correlation_of(norm1, column(res.table, k + 1)));
  return res;
}

ExperimentResult run_curve(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<double> grid;
  for (double g = cfg.grid_lo; g <= cfg.grid_hi + 1e-12; g += cfg.grid_step)
    grid.push_back(g);

  ExperimentResult res;
  res.table.columns = {"sup_distance"};
  res.table.rows.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, ctx.threads, [&](std::uint64_t r) {
    auto pop_rng = make_stream(cfg.master_seed, r, StreamRole::population);
    auto sched_rng = make_stream(cfg.master_seed, r, StreamRole::schedule);
    const auto pop = sample_population(cfg.demographics, pop_rng);
    const auto sched = simulate_schedule(cfg.demographics, pop, sched_rng);
    const auto cmp = logistic_curve_check(sched, ctx.lambda, cfg.demographics.p, grid);
    res.table.rows[r] = {r, {cmp.sup_distance}};
  });

  auto sup = column(res.table, 0);
  res.summary.add("mean_sup_distance", mean_of(sup));
  res.summary.add("median_sup_distance", median_of(sup));
  double below = 0.0;
  for (double s : sup)
    if (s < 0.05) below += 1.0;
  res.summary.add("frac_sup_below_0.05", below / static_cast<double>(sup.size()));
  return res;
}

ExperimentResult run_slowdown(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const double n = static_cast<double>(cfg.demographics.n);
  const double p = cfg.demographics.p;
  const double factor = slowdown_factor(n, p);
  ExperimentResult res;
  res.table.columns = {"slowdown_factor", "broadcast_center", "passage_center"};
  res.table.rows = {{0, {factor,
                         approx_broadcast_center(n, p, ctx.lambda),
                         approx_passage_center(n, p, ctx.lambda)}}};
  res.summary.add("slowdown_factor", factor);
  res.summary.add("broadcast_center", approx_broadcast_center(n, p, ctx.lambda));
  res.summary.add("passage_center", approx_passage_center(n, p, ctx.lambda));
  return res;
}

ExperimentResult run_oracle(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  ExperimentResult res;
  res.table.columns = {"t_half_repr", "t_full_repr", "t_half_naive", "t_full_naive"};
  res.table.rows.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, ctx.threads, [&](std::uint64_t r) {
    auto pop_rng = make_stream(cfg.master_seed, r, StreamRole::population);
    auto sched_rng = make_stream(cfg.master_seed, r, StreamRole::schedule);
    auto pop2_rng = make_stream(cfg.master_seed, r, StreamRole::population_alt);
    auto naive_rng = make_stream(cfg.master_seed, r, StreamRole::naive);
    const auto pop = sample_population(cfg.demographics, pop_rng);
    const auto repr = broadcast_summary(simulate_schedule(cfg.demographics, pop, sched_rng));
    const auto pop2 = sample_population(cfg.demographics, pop2_rng);
    const auto naive = broadcast_summary(simulate_naive(cfg.demographics, pop2, naive_rng));
    res.table.rows[r] = {r, {repr.t_half, repr.t_full, naive.t_half, naive.t_full}};
  });

  res.summary.add("ks_t_half",
                  ks_two_sample(Ecdf::from_samples(column(res.table, 0)),
                                Ecdf::from_samples(column(res.table, 2))));
  res.summary.add("ks_t_full",
                  ks_two_sample(Ecdf::from_samples(column(res.table, 1)),
                                Ecdf::from_samples(column(res.table, 3))));
  return res;
}

ExperimentResult run_yule(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const std::size_t m = cfg.yule_m;
  ExperimentResult res;
  res.table.columns = {"t_hat_1", "t_hat_m", "d_m", "ref_t_m"};
  res.table.rows.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, ctx.threads, [&](std::uint64_t r) {
    auto thin_rng = make_stream(cfg.master_seed, r, StreamRole::thinning);
    auto ref_rng = make_stream(cfg.master_seed, r, StreamRole::limits);
    const auto run = simulate_thinned_yule(cfg.demographics.p, cfg.demographics.z0,
                                           cfg.demographics.rates, m, thin_rng);
    const auto ref = yule_reference_times(cfg.demographics.z0, cfg.demographics.rates,
                                          m, ctx.lambda, cfg.demographics.p, ref_rng);
    res.table.rows[r] = {r, {run.t_hat.front(), run.t_hat.back(),
                             static_cast<double>(run.d.back()), ref.back()}};
  });

  res.summary.add("mean_t_hat_1", mean_of(column(res.table, 0)));
  res.summary.add("ks_t_hat_m_vs_ref",
                  ks_two_sample(Ecdf::from_samples(column(res.table, 1)),
                                Ecdf::from_samples(column(res.table, 3))));
  return res;
}

ExperimentResult run_limits(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const VSamplerConfig vcfg = v_sampler_config(cfg);
  ExperimentResult res;
  res.table.columns = {"v", "gumbel", "logistic", "v_plus_gumbel", "v_plus_logistic"};
  res.table.rows.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, ctx.threads, [&](std::uint64_t r) {
    auto rng = make_stream(cfg.master_seed, r, StreamRole::limits);
    const double v = sample_v(vcfg, rng);
    const double g = gumbel_sample(rng);
    const double l = logistic_sample(rng);
    res.table.rows[r] = {r, {v, g, l, v + g, v + l}};
  });

  const auto v = column(res.table, 0);
  res.summary.add("mean_v", mean_of(v));
  res.summary.add("mean_gumbel", mean_of(column(res.table, 1)));
  res.summary.add("ks_v_vs_gumbel", ks_one_sample(Ecdf::from_samples(v), gumbel_cdf));
  return res;
}

}  // namespace

ExperimentResult run(const ExperimentConfig& cfg, unsigned threads) {
  const RateMoments moments = [&] {
    try {
      return validate(cfg.demographics);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("demographics: ") + e.what());
    }
  }();
  RunContext ctx{cfg, moments.lambda, threads};

  ExperimentResult res;
  switch (cfg.experiment) {
    case ExperimentKind::broadcast: res = run_broadcast(ctx); break;
    case ExperimentKind::passage: res = run_passage(ctx); break;
    case ExperimentKind::curve: res = run_curve(ctx); break;
    case ExperimentKind::slowdown: res = run_slowdown(ctx); break;
    case ExperimentKind::oracle: res = run_oracle(ctx); break;
    case ExperimentKind::yule: res = run_yule(ctx); break;
    case ExperimentKind::limits: res = run_limits(ctx); break;
  }
  Summary header;
  header.add("n", static_cast<double>(cfg.demographics.n));
  header.add("p", cfg.demographics.p);
  header.add("z0", cfg.demographics.z0);
  header.add("lambda", moments.lambda);
  header.add("replicates", static_cast<double>(cfg.replicates));
  header.entries.insert(header.entries.end(),
                        res.summary.entries.begin(), res.summary.entries.end());
  res.summary = std::move(header);
  return res;
}

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void emit(const ExperimentResult& result, const std::string& out_dir, OutputFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  const std::string data_path =
      out_dir + (format == OutputFormat::csv ? "/results.csv" : "/results.jsonl");
  std::ofstream data(data_path, std::ios::binary);
  if (!data) throw IoError("cannot open for writing: " + data_path);
  if (format == OutputFormat::csv) {
    data << "replicate";
    for (const auto& col : result.table.columns) data << "," << col;
    data << "\n";
    for (const auto& row : result.table.rows) {
      data << row.replicate;
      for (double v : row.values) data << "," << format_value(v);
      data << "\n";
    }
  } else {
    for (const auto& row : result.table.rows) {
      nlohmann::ordered_json obj;
      obj["replicate"] = row.replicate;
      for (std::size_t i = 0; i < result.table.columns.size(); ++i)
        obj[result.table.columns[i]] = row.values[i];
      data << obj.dump() << "\n";
    }
  }
  if (!data.flush()) throw IoError("write failed: " + data_path);

  const std::string summary_path = out_dir + "/summary.json";
  std::ofstream summary(summary_path, std::ios::binary);
  if (!summary) throw IoError("cannot open for writing: " + summary_path);
  nlohmann::ordered_json obj;
  for (const auto& [key, value] : result.summary.entries) obj[key] = value;
  summary << obj.dump(2) << "\n";
  if (!summary.flush()) throw IoError("write failed: " + summary_path);
}

}  // namespace spreadlab
