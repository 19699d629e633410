#include "spreadlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spreadlab/asymptotics.hpp"

namespace spreadlab {

Ecdf Ecdf::from_samples(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("Ecdf: empty sample");
  std::sort(values.begin(), values.end());
  return Ecdf{std::move(values)};
}

double Ecdf::eval(double t) const {
  auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), t);
  return static_cast<double>(it - sorted_values.begin()) /
         static_cast<double>(sorted_values.size());
}

double ks_one_sample(const Ecdf& e, const std::function<double(double)>& cdf) {
  const double dn = static_cast<double>(e.count());
  double sup = 0.0;
  for (std::size_t i = 0; i < e.count(); ++i) {
    const double f = cdf(e.sorted_values[i]);
    const double hi = (static_cast<double>(i) + 1.0) / dn - f;
    const double lo = f - static_cast<double>(i) / dn;
    sup = std::max({sup, hi, lo});
  }
  return sup;
}

double ks_two_sample(const Ecdf& a, const Ecdf& b) {
  const double na = static_cast<double>(a.count());
  const double nb = static_cast<double>(b.count());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < a.count() && j < b.count()) {
    const double xa = a.sorted_values[i];
    const double xb = b.sorted_values[j];
    if (xa <= xb) ++i;
    if (xb <= xa) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
  }
  return sup;
}

CurveComparison logistic_curve_check(const TransmissionSchedule& sched,
                                     double lambda, double p,
                                     const std::vector<double>& grid) {
  CurveComparison cmp;
  cmp.grid = grid;
  cmp.empirical.reserve(grid.size());
  cmp.reference.reserve(grid.size());
  const double t_half = sched.times[sched.n / 2];
  double sup = 0.0;
  for (double g : grid) {
    const double emp = informed_fraction(sched, t_half + g / (lambda * p));
    const double ref = logistic_cdf(g);
    cmp.empirical.push_back(emp);
    cmp.reference.push_back(ref);
    sup = std::max(sup, std::abs(emp - ref));
  }
  cmp.sup_distance = sup;
  return cmp;
}

std::vector<double> default_curve_grid() {
  std::vector<double> grid;
  grid.reserve(161);
  for (int i = -80; i <= 80; ++i) grid.push_back(static_cast<double>(i) / 10.0);
  return grid;
}

}  // namespace spreadlab
