#include "spreadlab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace spreadlab {

TransmissionSchedule simulate_schedule(const Demographics& demo,
                                       const PopulationSample& pop,
                                       std::mt19937_64& rng) {
  const std::size_t n = demo.n;
  TransmissionSchedule sched;
  sched.n = n;
  sched.times.resize(n + 1);
  sched.intensities.resize(n + 1);
  sched.times[0] = 0.0;
  sched.intensities[0] = demo.z0;

  std::exponential_distribution<double> exp1(1.0);
  const double dn = static_cast<double>(n);
  double t = 0.0;
  double r = demo.z0;
  for (std::size_t j = 0; j < n; ++j) {
    t += dn / (dn - static_cast<double>(j)) * exp1(rng) / r;
    if (pop.theta[j]) r += pop.z[j];
    sched.times[j + 1] = t;
    sched.intensities[j + 1] = r;
  }
  return sched;
}

BroadcastSummary broadcast_summary(const TransmissionSchedule& sched) {
  const double t_half = sched.times[sched.n / 2];
  const double t_full = sched.times[sched.n];
  return {t_half, t_full - t_half, t_full};
}

PassageTimes passage_times(const TransmissionSchedule& sched,
                           std::size_t k_targets,
                           std::mt19937_64& rng) {
  const std::size_t n = sched.n;
  if (k_targets < 1 || k_targets > n)
    throw std::invalid_argument("k_targets must be in [1, n]");

  // Floyd's algorithm: k distinct ranks uniform without replacement in {1..n}.
  PassageTimes out;
  out.ranks.reserve(k_targets);
  out.taus.reserve(k_targets);
  std::unordered_set<std::size_t> chosen;
  for (std::size_t i = n - k_targets + 1; i <= n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(1, i);
    std::size_t r = pick(rng);
    if (!chosen.insert(r).second) {
      chosen.insert(i);
      r = i;
    }
    out.ranks.push_back(r);
  }
  for (std::size_t r : out.ranks) out.taus.push_back(sched.times[r]);
  return out;
}

double informed_fraction(const TransmissionSchedule& sched, double t) {
  auto first = sched.times.begin() + 1;
  auto it = std::upper_bound(first, sched.times.end(), t);
  return static_cast<double>(it - first) / static_cast<double>(sched.n);
}

double normalized_interval(const TransmissionSchedule& sched,
                           std::size_t l, std::size_t m,
                           double lambda, double p) {
  if (l >= m || m > sched.n)
    throw std::out_of_range("normalized_interval: need 0 <= l < m <= n");
  return lambda * p * (sched.times[m] - sched.times[l]);
}

TransmissionSchedule simulate_naive(const Demographics& demo,
                                    const PopulationSample& pop,
                                    std::mt19937_64& rng) {
  const std::size_t n = demo.n;
  TransmissionSchedule sched;
  sched.n = n;
  sched.times.resize(n + 1);
  sched.intensities.resize(n + 1);
  sched.times[0] = 0.0;
  sched.intensities[0] = demo.z0;

  std::exponential_distribution<double> exp1(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Global next-event loop over contacts of informed transmitters.  A contact
  // hits a uniformly random node among the n others of its source; any
  // uninformed node is hit with probability 1/n, so a contact informs with
  // probability (n - k)/n and the informed node is uniform among the
  // uninformed ones.
  std::vector<std::size_t> uninformed(n);
  for (std::size_t i = 0; i < n; ++i) uninformed[i] = i;

  double t = 0.0;
  double w = demo.z0;  // aggregate rate of informed transmitters
  std::size_t k = 0;
  while (k < n) {
    t += exp1(rng) / w;
    if (unif(rng) * static_cast<double>(n) < static_cast<double>(n - k)) {
      std::uniform_int_distribution<std::size_t> pick(0, uninformed.size() - 1);
      const std::size_t slot = pick(rng);
      const std::size_t node = uninformed[slot];
      uninformed[slot] = uninformed.back();
      uninformed.pop_back();
      if (pop.theta[node]) w += pop.z[node];
      ++k;
      sched.times[k] = t;
      sched.intensities[k] = w;
    }
  }
  return sched;
}

ThinnedYuleRun simulate_thinned_yule(double p, double z0,
                                     const RateDistribution& rates,
                                     std::size_t m,
                                     std::mt19937_64& rng) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("p must be in (0,1]");
  if (!(z0 > 0.0)) throw std::invalid_argument("z0 must be > 0");

  ThinnedYuleRun run;
  run.t_hat.reserve(m);
  run.d.reserve(m);
  std::exponential_distribution<double> exp1(1.0);
  // geometric_distribution counts failures before the first success; the
  // number of births until the next capable one is that plus one.
  std::geometric_distribution<std::uint64_t> skip(p);

  double t = 0.0;
  double r = z0;  // reproduction rate stays constant between capable births
  std::uint64_t d = 0;
  for (std::size_t l = 0; l < m; ++l) {
    const std::uint64_t births = skip(rng) + 1;
    for (std::uint64_t i = 0; i < births; ++i) t += exp1(rng) / r;
    d += births;
    run.t_hat.push_back(t);
    run.d.push_back(d);
    r += rates.sample(rng);
  }
  return run;
}

std::vector<double> yule_reference_times(double z0,
                                         const RateDistribution& rates,
                                         std::size_t m,
                                         double lambda, double p,
                                         std::mt19937_64& rng) {
  std::vector<double> out;
  out.reserve(m);
  std::exponential_distribution<double> exp1(1.0);
  double sum_z = z0;  // lambda * J_k
  double acc = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    acc += exp1(rng) * lambda / sum_z;  // xi_k / J_k
    out.push_back(acc / (lambda * p));
    sum_z += rates.sample(rng);
  }
  return out;
}

}  // namespace spreadlab
