#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace spreadlab {

// Contact-rate distribution F, restricted to a parametric menu so that the
// mean and second moment have closed forms.
struct RateDistribution {
  enum class Kind { point_mass, exponential, uniform, lognormal, two_point };

  Kind kind = Kind::point_mass;
  // Parameter slots, meaning depends on kind:
  //   point_mass:  a = value
  //   exponential: a = mean
  //   uniform:     a = lo, b = hi
  //   lognormal:   a = mu, b = sigma
  //   two_point:   a = value_a, b = prob_a, c = value_b
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;

  static RateDistribution point_mass(double value);
  static RateDistribution exponential(double mean);
  static RateDistribution uniform(double lo, double hi);
  static RateDistribution lognormal(double mu, double sigma);
  static RateDistribution two_point(double value_a, double prob_a, double value_b);

  double mean() const;
  double second_moment() const;
  double sample(std::mt19937_64& rng) const;

  std::string describe() const;
};

// Model triple (z0, p, F) plus population size n.
struct Demographics {
  std::size_t n = 1;       // nonroot population size
  double p = 1.0;          // transmitter probability, in (0, 1]
  double z0 = 1.0;         // root contact rate, > 0
  RateDistribution rates;  // contact-rate distribution F
};

// Realized (theta_i, Z_i) for the n nonroot nodes of one replicate.
struct PopulationSample {
  std::vector<std::uint8_t> theta;
  std::vector<double> z;
};

struct RateMoments {
  double lambda;  // mean contact rate
  double m2;      // second moment
};

// Checks the model invariants; throws std::invalid_argument on violation
// and otherwise returns the closed-form moments of F.
RateMoments validate(const Demographics& demo);

// theta_i i.i.d. Bernoulli(p), Z_i i.i.d. from F, the two vectors
// independent; deterministic given the stream state.
PopulationSample sample_population(const Demographics& demo, std::mt19937_64& rng);

}  // namespace spreadlab
