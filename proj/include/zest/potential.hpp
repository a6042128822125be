#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "zest/errors.hpp"
#include "zest/quadrature.hpp"
#include "zest/roots.hpp"

namespace zest {

// Interior radius below which the switched-off leading term vanishes exactly.
inline constexpr double kCutLo = 0.25;
// The subleading tail correction vanishes below this radius.
inline constexpr double kV2Lo = 0.5;

enum class CutoffMode { CutInterior, PureHomogeneous };

// Attractive radial potential family
//   V(r) = V1(r) + V2(r),
//   V1(r) = -gamma * r^(-mu)            for r >= 1 (switched off on [kCutLo, 1]
//                                        in CutInterior mode, kept homogeneous
//                                        down to r = 0 otherwise),
//   V2(r) = -v2_beta * r^(-mu-v2_eps2)  for r >= 1, zero below kV2Lo, smoothly
//                                        interpolated on [kV2Lo, 1].
struct PotentialModel {
  double gamma = 1.0;
  double mu = 1.0;
  double R0 = 1.0;
  CutoffMode cutoff_mode = CutoffMode::CutInterior;
  double v2_beta = 0.0;
  double v2_eps2 = 1.0;
  int dim = 3;

  void validate() const {
    if (!(gamma > 0.0)) throw validation_error("potential: gamma must be positive");
    if (!(mu > 0.0 && mu < 2.0)) throw validation_error("potential: mu must lie in (0,2)");
    if (!(R0 >= 1.0)) throw validation_error("potential: R0 must be >= 1");
    if (!(v2_eps2 > 0.0)) throw validation_error("potential: v2_eps2 must be positive");
    if (dim < 2) throw validation_error("potential: dim must be >= 2");
    if (!std::isfinite(gamma) || !std::isfinite(mu) || !std::isfinite(R0) ||
        !std::isfinite(v2_beta) || !std::isfinite(v2_eps2)) {
      throw validation_error("potential: non-finite parameter");
    }
  }
};

// One partial wave of the reduced half-line problem.
struct Channel {
  PotentialModel model;
  int l = 0;       // partial-wave order
  double k = 0.0;  // l + (dim-3)/2
  double r0 = 0.0; // turning point of the effective potential, 0 when absent

  double kk1() const { return k * (k + 1.0); }
};

namespace detail {

// C-infinity switch: 0 for x <= 0, 1 for x >= 1, strictly increasing between.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

inline double smooth_step_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  const double da = a / (x * x);
  const double db = b / ((1.0 - x) * (1.0 - x));
  return (da * b + a * db) / ((a + b) * (a + b));
}

}  // namespace detail

// Leading term V1 and its radial derivative.
inline double eval_v1(const PotentialModel& m, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw validation_error("eval_v1: r must be positive and finite");
  const double hom = -m.gamma * std::pow(r, -m.mu);
  if (m.cutoff_mode == CutoffMode::PureHomogeneous || r >= 1.0) return hom;
  if (r <= kCutLo) return 0.0;
  return hom * detail::smooth_step((r - kCutLo) / (1.0 - kCutLo));
}

inline double eval_v1_deriv(const PotentialModel& m, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw validation_error("eval_v1_deriv: r must be positive and finite");
  const double hom = -m.gamma * std::pow(r, -m.mu);
  const double dhom = m.gamma * m.mu * std::pow(r, -m.mu - 1.0);
  if (m.cutoff_mode == CutoffMode::PureHomogeneous || r >= 1.0) return dhom;
  if (r <= kCutLo) return 0.0;
  const double x = (r - kCutLo) / (1.0 - kCutLo);
  return dhom * detail::smooth_step(x) + hom * detail::smooth_step_deriv(x) / (1.0 - kCutLo);
}

// Subleading tail correction V2 and its radial derivative.
inline double eval_v2(const PotentialModel& m, double r) {
  if (m.v2_beta == 0.0) return 0.0;
  if (!(r > 0.0) || !std::isfinite(r)) throw validation_error("eval_v2: r must be positive and finite");
  if (r <= kV2Lo) return 0.0;
  const double hom = -m.v2_beta * std::pow(r, -m.mu - m.v2_eps2);
  if (r >= 1.0) return hom;
  return hom * detail::smooth_step((r - kV2Lo) / (1.0 - kV2Lo));
}

inline double eval_v2_deriv(const PotentialModel& m, double r) {
  if (m.v2_beta == 0.0) return 0.0;
  if (!(r > 0.0) || !std::isfinite(r)) throw validation_error("eval_v2_deriv: r must be positive and finite");
  if (r <= kV2Lo) return 0.0;
  const double hom = -m.v2_beta * std::pow(r, -m.mu - m.v2_eps2);
  const double dhom = m.v2_beta * (m.mu + m.v2_eps2) * std::pow(r, -m.mu - m.v2_eps2 - 1.0);
  if (r >= 1.0) return dhom;
  const double x = (r - kV2Lo) / (1.0 - kV2Lo);
  return dhom * detail::smooth_step(x) + hom * detail::smooth_step_deriv(x) / (1.0 - kV2Lo);
}

inline double eval_potential(const PotentialModel& m, double r) {
  return eval_v1(m, r) + eval_v2(m, r);
}

inline double eval_potential_deriv(const PotentialModel& m, double r) {
  return eval_v1_deriv(m, r) + eval_v2_deriv(m, r);
}

// Local momentum g(r) = sqrt(2*lambda - 2*V1(r)).
inline double eval_g(const PotentialModel& m, double r, double lambda) {
  if (!(lambda >= 0.0)) throw validation_error("eval_g: lambda must be nonnegative");
  const double arg = 2.0 * lambda - 2.0 * eval_v1(m, r);
  if (!(arg > 0.0)) {
    throw validation_error("eval_g: degenerate momentum (lambda = 0 inside the cutoff interior)");
  }
  return std::sqrt(arg);
}

// h(r) = ( ∫_r^∞ r'^(-2) g(r')^(-1) dr' )^(-1), the comparison scale
// satisfying c*r*g <= h <= C*r*g.  The substitution s = 1/r' maps the domain
// to (0, 1/r]; at lambda = 0 the transformed integrand carries an s^(-mu/2)
// endpoint factor which the quadrature wrapper absorbs exactly.
inline double eval_h(const PotentialModel& m, double r, double lambda) {
  if (!(r >= 1.0)) throw validation_error("eval_h: requires r >= 1");
  if (!(lambda >= 0.0)) throw validation_error("eval_h: lambda must be nonnegative");
  auto integrand = [&m, lambda](double s) {
    return 1.0 / eval_g(m, 1.0 / s, lambda);
  };
  const double mass = integrate_alg_left(integrand, 0.0, 1.0 / r, -0.5 * m.mu, {1e-12});
  return 1.0 / mass;
}

inline double effective_potential(const Channel& ch, double r) {
  return 2.0 * eval_potential(ch.model, r) + ch.kk1() / (r * r);
}

inline double effective_potential_deriv(const Channel& ch, double r) {
  return 2.0 * eval_potential_deriv(ch.model, r) - 2.0 * ch.kk1() / (r * r * r);
}

// Builds the Channel for partial wave l: effective index k = l + (dim-3)/2 and
// the turning point r0 of V_k (closed form (k(k+1)/2γ)^(1/(2-μ)) for the pure
// homogeneous potential, bracketed root finding otherwise; r0 = 0 when the
// centrifugal barrier is absent, i.e. k(k+1) <= 0).
inline Channel turning_point(const PotentialModel& m, int l) {
  m.validate();
  if (l < 0) throw validation_error("turning_point: l must be nonnegative");
  Channel ch;
  ch.model = m;
  ch.l = l;
  ch.k = l + 0.5 * (m.dim - 3);
  const double kk1 = ch.kk1();
  if (kk1 <= 0.0) {
    ch.r0 = 0.0;
    return ch;
  }
  const double r0_hom = std::pow(kk1 / (2.0 * m.gamma), 1.0 / (2.0 - m.mu));
  if (m.cutoff_mode == CutoffMode::PureHomogeneous && m.v2_beta == 0.0) {
    ch.r0 = r0_hom;
    return ch;
  }
  auto vk = [&ch](double r) { return effective_potential(ch, r); };
  // Bracket: V_k > 0 near the origin (centrifugal barrier), < 0 far out.
  double r_lo = std::min(1e-6, 0.5 * r0_hom);
  while (!(vk(r_lo) > 0.0)) {
    r_lo *= 0.5;
    if (r_lo < 1e-300) throw convergence_error("turning_point: no positive inner bracket");
  }
  double r_hi = 2.0 * std::max(r0_hom, 1.0);
  while (!(vk(r_hi) < 0.0)) {
    r_hi *= 2.0;
    if (r_hi > 1e300) throw convergence_error("turning_point: no negative outer bracket");
  }
  // Scan a log grid for sign changes; more than one means the turning point
  // is ambiguous and must be reported, not silently picked.
  const int n_scan = 400;
  std::vector<std::pair<double, double>> brackets;
  double prev_r = r_lo, prev_v = vk(r_lo);
  const double ratio = std::pow(r_hi / r_lo, 1.0 / n_scan);
  for (int i = 1; i <= n_scan; ++i) {
    const double ri = r_lo * std::pow(ratio, i);
    const double vi = vk(ri);
    if ((vi < 0.0) != (prev_v < 0.0)) brackets.emplace_back(prev_r, ri);
    prev_r = ri;
    prev_v = vi;
  }
  if (brackets.size() != 1) {
    std::string msg = "turning_point: expected one sign change of V_k, found " +
                      std::to_string(brackets.size());
    for (const auto& b : brackets) {
      msg += " [" + std::to_string(b.first) + ", " + std::to_string(b.second) + "]";
    }
    throw convergence_error(msg);
  }
  ch.r0 = find_root(vk, brackets.front().first, brackets.front().second, 1e-12);
  return ch;
}

}  // namespace zest
