#include "spreadlab/demographics.hpp"

#include <cmath>
#include <stdexcept>

namespace spreadlab {

RateDistribution RateDistribution::point_mass(double value) {
  return {Kind::point_mass, value, 0.0, 0.0};
}

RateDistribution RateDistribution::exponential(double mean) {
  return {Kind::exponential, mean, 0.0, 0.0};
}

RateDistribution RateDistribution::uniform(double lo, double hi) {
  return {Kind::uniform, lo, hi, 0.0};
}

RateDistribution RateDistribution::lognormal(double mu, double sigma) {
  return {Kind::lognormal, mu, sigma, 0.0};
}

RateDistribution RateDistribution::two_point(double value_a, double prob_a, double value_b) {
  return {Kind::two_point, value_a, prob_a, value_b};
}

double RateDistribution::mean() const {
  switch (kind) {
    case Kind::point_mass: return a;
    case Kind::exponential: return a;
    case Kind::uniform: return 0.5 * (a + b);
    case Kind::lognormal: return std::exp(a + 0.5 * b * b);
    case Kind::two_point: return b * a + (1.0 - b) * c;
  }
  return 0.0;
}

double RateDistribution::second_moment() const {
  switch (kind) {
    case Kind::point_mass: return a * a;
    case Kind::exponential: return 2.0 * a * a;
    case Kind::uniform: return (a * a + a * b + b * b) / 3.0;
    case Kind::lognormal: return std::exp(2.0 * a + 2.0 * b * b);
    case Kind::two_point: return b * a * a + (1.0 - b) * c * c;
  }
  return 0.0;
}

double RateDistribution::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::point_mass:
      return a;
    case Kind::exponential: {
      std::exponential_distribution<double> d(1.0 / a);
      return d(rng);
    }
    case Kind::uniform: {
      std::uniform_real_distribution<double> d(a, b);
      return d(rng);
    }
    case Kind::lognormal: {
      std::lognormal_distribution<double> d(a, b);
      return d(rng);
    }
    case Kind::two_point: {
      std::uniform_real_distribution<double> d(0.0, 1.0);
      return d(rng) < b ? a : c;
    }
  }
  return 0.0;
}

std::string RateDistribution::describe() const {
  switch (kind) {
    case Kind::point_mass: return "point_mass(" + std::to_string(a) + ")";
    case Kind::exponential: return "exponential(" + std::to_string(a) + ")";
    case Kind::uniform: return "uniform(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Kind::lognormal: return "lognormal(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Kind::two_point:
      return "two_point(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
  }
  return "?";
}

namespace {

void validate_rates(const RateDistribution& r) {
  switch (r.kind) {
    case RateDistribution::Kind::point_mass:
      if (r.a < 0.0) throw std::invalid_argument("point_mass: negative rate");
      break;
    case RateDistribution::Kind::exponential:
      if (r.a <= 0.0) throw std::invalid_argument("exponential: mean must be > 0");
      break;
    case RateDistribution::Kind::uniform:
      if (r.a < 0.0 || r.b < r.a) throw std::invalid_argument("uniform: need 0 <= lo <= hi");
      break;
    case RateDistribution::Kind::lognormal:
      if (r.b < 0.0) throw std::invalid_argument("lognormal: sigma must be >= 0");
      break;
    case RateDistribution::Kind::two_point:
      if (r.a < 0.0 || r.c < 0.0) throw std::invalid_argument("two_point: negative rate");
      if (r.b < 0.0 || r.b > 1.0) throw std::invalid_argument("two_point: prob_a outside [0,1]");
      break;
  }
}

}  // namespace

RateMoments validate(const Demographics& demo) {
  if (demo.n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(demo.p > 0.0) || demo.p > 1.0) throw std::invalid_argument("p must be in (0,1]");
  if (!(demo.z0 > 0.0)) throw std::invalid_argument("z0 must be > 0");
  validate_rates(demo.rates);
  const double lambda = demo.rates.mean();
  const double m2 = demo.rates.second_moment();
  if (!(lambda > 0.0)) throw std::invalid_argument("rate distribution has zero mean");
  if (!std::isfinite(lambda) || !std::isfinite(m2))
    throw std::invalid_argument("rate distribution moments overflow");
  return {lambda, m2};
}

PopulationSample sample_population(const Demographics& demo, std::mt19937_64& rng) {
  PopulationSample pop;
  pop.theta.resize(demo.n);
  pop.z.resize(demo.n);
  std::bernoulli_distribution coin(demo.p);
  for (std::size_t i = 0; i < demo.n; ++i) pop.theta[i] = coin(rng) ? 1 : 0;
  for (std::size_t i = 0; i < demo.n; ++i) pop.z[i] = demo.rates.sample(rng);
  return pop;
}

}  // namespace spreadlab
