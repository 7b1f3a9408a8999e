/* Large-deviation rate function I(x) = sup_beta (beta x - F(beta)) by
 * monotone bisection on the strictly increasing derivative F'. */
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "multising/errors.hpp"
#include "multising/free_energy.hpp"

namespace multising {

struct RatePoint {
  double x = 0.0;
  double rate = 0.0;  // +infinity outside [-1, 1]
  double eta = 0.0;   // optimizing beta, when finite
  bool capped = false;  // eta hit the search bound; rate is the chord value
};

namespace detail {

constexpr double kEtaBound = 50.0;
constexpr int kBisectionIterations = 80;

template <typename FpFn, typename FFn>
RatePoint conjugate_point(double x, FpFn&& fprime, FFn&& fvalue) {
  RatePoint pt;
  pt.x = x;
  if (std::fabs(x) >= 1.0) {
    pt.rate = std::numeric_limits<double>::infinity();
    pt.eta = std::numeric_limits<double>::quiet_NaN();
    pt.capped = true;
    return pt;
  }
  double lo = -kEtaBound, hi = kEtaBound;
  double flo = fprime(lo) - x;
  double fhi = fprime(hi) - x;
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    throw BracketFailure("derivative not finite at search bounds");
  if (flo >= 0.0 || fhi <= 0.0) {
    // x beyond the attainable slope range within the bounds: chord value
    pt.eta = (flo >= 0.0) ? lo : hi;
    pt.rate = pt.eta * x - fvalue(pt.eta);
    pt.capped = true;
    return pt;
  }
  for (int it = 0; it < kBisectionIterations; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = fprime(mid) - x;
    if (!std::isfinite(fm)) throw BracketFailure("derivative not finite");
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  pt.eta = 0.5 * (lo + hi);
  pt.rate = pt.eta * x - fvalue(pt.eta);
  if (pt.rate < 0.0 && pt.rate > -1e-9) pt.rate = 0.0;  // floating dust at the mean
  return pt;
}

}  // namespace detail

inline RatePoint rate_function(double r, const std::vector<long long>& gens,
                               double x, double tol) {
  detail::check_tol(tol);
  const double series_tol = std::min(tol * 1e-2, 1e-12);
  auto fp = [&](double b) {
    return free_energy_derivative(r, b, gens, series_tol);
  };
  auto fv = [&](double b) {
    return free_energy_1d(r, b, gens, series_tol).value;
  };
  return detail::conjugate_point(x, fp, fv);
}

inline RatePoint rate_function(double r, const SemigroupSpec& spec, int j,
                               double x, double tol) {
  return rate_function(r, direction_generators(spec, j), x, tol);
}

inline std::vector<RatePoint> rate_curve(double r,
                                         const std::vector<long long>& gens,
                                         const std::vector<double>& x_grid,
                                         double tol) {
  std::vector<RatePoint> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) out.push_back(rate_function(r, gens, x, tol));
  return out;
}

inline std::vector<RatePoint> rate_curve(double r, const SemigroupSpec& spec,
                                         int j,
                                         const std::vector<double>& x_grid,
                                         double tol) {
  return rate_curve(r, direction_generators(spec, j), x_grid, tol);
}

}  // namespace multising
