#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "spreadlab/demographics.hpp"

namespace spreadlab {

inline constexpr double euler_gamma = 0.5772156649015329;

enum class LimitLaw { v, gumbel, logistic, v_plus_gumbel, v_plus_logistic };

struct LimitSample {
  double value;
  LimitLaw law;
};

// Truncated-series sampler for the initial-phase limit V.
struct VSamplerConfig {
  double z0 = 1.0;
  RateDistribution rates;
  std::size_t truncation = 100000;
};

double gumbel_cdf(double t);
double gumbel_sample(std::mt19937_64& rng);

double logistic_cdf(double t);
double logistic_sample(std::mt19937_64& rng);

// V = gamma + sum_{k=1}^{truncation} (xi_k / J_k - 1/k),
// J_k = (z0 + Z_1 + ... + Z_{k-1}) / lambda with fresh Z draws from F.
double sample_v(const VSamplerConfig& cfg, std::mt19937_64& rng);

// V + G with independent standard Gumbel G (broadcast-time limit).
double sample_limit_broadcast(const VSamplerConfig& cfg, std::mt19937_64& rng);

// V + L with independent standard logistic L (passage-time limit).
double sample_limit_passage(const VSamplerConfig& cfg, std::mt19937_64& rng);

// One shared V plus k independent logistics: the joint passage-time limit.
std::vector<double> sample_limit_passage_joint(const VSamplerConfig& cfg,
                                               std::size_t k,
                                               std::mt19937_64& rng);

// Nonrandom centering terms (log(np) + log n) / (lambda p) and
// log(np) / (lambda p).
double approx_broadcast_center(double n, double p, double lambda);
double approx_passage_center(double n, double p, double lambda);

// B(n,p)/B(n,1) = (1/p)(1 - log(1/p) / (2 log n)).
double slowdown_factor(double n, double p);

// Samples sum_{i<=m} xi_i / i and returns the one-sample KS distance against
// the max-of-m-exponentials CDF (1 - e^{-t})^m.
double renyi_max_check(std::size_t m, std::size_t samples, std::mt19937_64& rng);

}  // namespace spreadlab
