#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "spreadlab/demographics.hpp"

namespace spreadlab {

// Ordered transmission times T_0 = 0 <= T_1 <= ... <= T_n together with the
// spreading intensities R_0 ... R_n in effect after each informing.
struct TransmissionSchedule {
  std::size_t n = 0;
  std::vector<double> times;        // size n+1, times[0] == 0
  std::vector<double> intensities;  // size n+1, intensities[0] == z0
};

struct BroadcastSummary {
  double t_half;   // times[floor(n/2)]
  double t_half2;  // t_full - t_half
  double t_full;   // times[n]
};

struct PassageTimes {
  std::vector<std::size_t> ranks;  // distinct, each in {1,...,n}
  std::vector<double> taus;        // taus[i] == times[ranks[i]]
};

// Birth times of reproduction-capable individuals in the thinned Yule
// process, together with their indices among all births.
struct ThinnedYuleRun {
  std::vector<double> t_hat;
  std::vector<std::uint64_t> d;
};

// Exact simulator via the transmission-time representation:
// T_k = sum_{j<k} (n/(n-j)) xi_j / R_j with R_j = z0 + sum_{i<=j} theta_i Z_i.
// Consumes exactly n unit exponential variates from rng.
TransmissionSchedule simulate_schedule(const Demographics& demo,
                                       const PopulationSample& pop,
                                       std::mt19937_64& rng);

BroadcastSummary broadcast_summary(const TransmissionSchedule& sched);

// Joint first passage times of k tagged nonroot nodes, realized by drawing
// k distinct informing ranks uniformly without replacement.
PassageTimes passage_times(const TransmissionSchedule& sched,
                           std::size_t k_targets,
                           std::mt19937_64& rng);

// Proportion of informed nonroot nodes at time t.
double informed_fraction(const TransmissionSchedule& sched, double t);

// Normalized span lambda * p * (times[m] - times[l]).
double normalized_interval(const TransmissionSchedule& sched,
                           std::size_t l, std::size_t m,
                           double lambda, double p);

// Event-driven continuous-time Markov chain simulation; distributionally
// identical to simulate_schedule but follows the contact dynamics directly
// (including contacts that hit already-informed targets).
TransmissionSchedule simulate_naive(const Demographics& demo,
                                    const PopulationSample& pop,
                                    std::mt19937_64& rng);

// Thinned Yule process: only a p-fraction of individuals reproduce.  Returns
// the first m birth times of reproduction-capable individuals and their
// indices among all births.  Skips non-reproducing births geometrically.
ThinnedYuleRun simulate_thinned_yule(double p, double z0,
                                     const RateDistribution& rates,
                                     std::size_t m,
                                     std::mt19937_64& rng);

// Samples the reference representation (lambda p)^{-1} sum_{l<=m} xi_l / J_l
// with J_l built from fresh i.i.d. draws of F; returns the m partial sums.
std::vector<double> yule_reference_times(double z0,
                                         const RateDistribution& rates,
                                         std::size_t m,
                                         double lambda, double p,
                                         std::mt19937_64& rng);

}  // namespace spreadlab
