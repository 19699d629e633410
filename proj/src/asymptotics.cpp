#include "spreadlab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "spreadlab/stats.hpp"

namespace spreadlab {

namespace {

double uniform_open(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  double u = d(rng);
  while (u <= 0.0) u = d(rng);
  return u;
}

}  // namespace

double gumbel_cdf(double t) { return std::exp(-std::exp(-t)); }

double gumbel_sample(std::mt19937_64& rng) {
  return -std::log(-std::log(uniform_open(rng)));
}

double logistic_cdf(double t) {
  // stable in both tails
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (e + 1.0);
}

double logistic_sample(std::mt19937_64& rng) {
  const double u = uniform_open(rng);
  return std::log(u / (1.0 - u));
}

double sample_v(const VSamplerConfig& cfg, std::mt19937_64& rng) {
  if (cfg.truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  const double lambda = cfg.rates.mean();
  if (!(lambda > 0.0)) throw std::invalid_argument("rate distribution has zero mean");

  std::exponential_distribution<double> exp1(1.0);
  double sum_z = cfg.z0;  // lambda * J_k
  double acc = euler_gamma;
  for (std::size_t k = 1; k <= cfg.truncation; ++k) {
    acc += exp1(rng) * lambda / sum_z - 1.0 / static_cast<double>(k);
    sum_z += cfg.rates.sample(rng);
  }
  return acc;
}

double sample_limit_broadcast(const VSamplerConfig& cfg, std::mt19937_64& rng) {
  return sample_v(cfg, rng) + gumbel_sample(rng);
}

double sample_limit_passage(const VSamplerConfig& cfg, std::mt19937_64& rng) {
  return sample_v(cfg, rng) + logistic_sample(rng);
}

std::vector<double> sample_limit_passage_joint(const VSamplerConfig& cfg,
                                               std::size_t k,
                                               std::mt19937_64& rng) {
  const double v = sample_v(cfg, rng);
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = v + logistic_sample(rng);
  return out;
}

double approx_broadcast_center(double n, double p, double lambda) {
  return (std::log(n * p) + std::log(n)) / (lambda * p);
}

double approx_passage_center(double n, double p, double lambda) {
  return std::log(n * p) / (lambda * p);
}

double slowdown_factor(double n, double p) {
  if (n < 2.0) throw std::invalid_argument("slowdown_factor: n must be >= 2");
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("slowdown_factor: p must be in (0,1]");
  return (1.0 / p) * (1.0 - std::log(1.0 / p) / (2.0 * std::log(n)));
}

double renyi_max_check(std::size_t m, std::size_t samples, std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("renyi_max_check: m must be >= 1");
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> draws(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= m; ++i) acc += exp1(rng) / static_cast<double>(i);
    draws[s] = acc;
  }
  const Ecdf e = Ecdf::from_samples(std::move(draws));
  const double dm = static_cast<double>(m);
  return ks_one_sample(e, [dm](double t) {
    return t <= 0.0 ? 0.0 : std::pow(1.0 - std::exp(-t), dm);
  });
}

}  // namespace spreadlab
