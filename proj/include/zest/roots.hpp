#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "zest/errors.hpp"

namespace zest {

// Bracketed root of a continuous function on [lo, hi] (TOMS 748).
// The bracket must carry a sign change; rel_tol is relative to the root
// location (with an absolute floor for roots near zero).
template <class F>
double find_root(F&& f, double lo, double hi, double rel_tol = 1e-13) {
  if (!(lo < hi)) throw validation_error("find_root: empty bracket");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw validation_error("find_root: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  auto tol = [rel_tol](double a, double b) {
    return std::fabs(b - a) <= rel_tol * std::max(1e-30, std::min(std::fabs(a), std::fabs(b)));
  };
  std::uintmax_t iter = 200;
  auto bracket = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iter);
  if (iter >= 200) {
    throw convergence_error("find_root: iteration budget exhausted on [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
  }
  return 0.5 * (bracket.first + bracket.second);
}

// Plain bisection.  Slow; kept as an independent oracle so tests can
// cross-check find_root through a different code path.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-14) {
  if (!(lo < hi)) throw validation_error("bisect: empty bracket");
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw validation_error("bisect: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  for (int i = 0; i < 2000 && hi - lo > rel_tol * std::max(1e-30, std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace zest
