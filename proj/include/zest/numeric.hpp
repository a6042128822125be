#pragma once

// Small shared numeric helpers used across modules.

#include <array>
#include <cmath>
#include <utility>

namespace zest {
namespace detail {

inline constexpr double kPi = 3.14159265358979323846;

// Accelerates a sequence w(r) sampled at three geometrically spaced radii
// (r increasing) toward its limit, assuming the remainder follows a single
// power law w(r) = w_inf + A r^(-p) with p fitted from the data.  Returns
// {limit estimate, uncertainty}.
inline std::pair<double, double> extrapolate_power(
    const std::array<std::pair<double, double>, 3>& pts) {
  const double d1 = pts[1].second - pts[0].second;
  const double d2 = pts[2].second - pts[1].second;
  if (d1 == 0.0 || d2 == 0.0) return {pts[2].second, 0.0};
  const double rho = d2 / d1;
  if (!(rho > 0.0 && rho < 0.95)) {
    // not in the asymptotic power-law regime; return the raw endpoint with
    // the last difference as the uncertainty
    return {pts[2].second, std::fabs(d2)};
  }
  const double corr = d2 * rho / (1.0 - rho);
  return {pts[2].second + corr, std::fabs(corr) * 0.5 + 1e-15};
}

}  // namespace detail
}  // namespace zest
