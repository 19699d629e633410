#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "spreadlab/engine.hpp"

namespace spreadlab {

struct Ecdf {
  std::vector<double> sorted_values;

  static Ecdf from_samples(std::vector<double> values);  // sorts its input
  std::size_t count() const { return sorted_values.size(); }
  // fraction of values <= t (right-continuous step function)
  double eval(double t) const;
};

// One-sample Kolmogorov-Smirnov distance against a reference CDF.
double ks_one_sample(const Ecdf& e, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(const Ecdf& a, const Ecdf& b);

// Informed-fraction curve around the half-broadcast time vs the standard
// logistic CDF, evaluated on a grid of normalized time offsets.
struct CurveComparison {
  std::vector<double> grid;
  std::vector<double> empirical;
  std::vector<double> reference;
  double sup_distance;
};

CurveComparison logistic_curve_check(const TransmissionSchedule& sched,
                                     double lambda, double p,
                                     const std::vector<double>& grid);

// 161 points, t in [-8, 8] step 0.1.
std::vector<double> default_curve_grid();

}  // namespace spreadlab
