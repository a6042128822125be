#pragma once

// Zero-energy radial solutions and phase shifts for attractive power-law
// potentials.
//
// The reduced wave u solves  -u'' + V_k u = 0  with
//
//   V_k(r) = 2 V(r) + k(k+1)/r^2,      k = l + (dim-3)/2,
//
// normalized as the regular solution  lim_{r->0} r^-(l+(dim-1)/2) u(r) = 1.
// Far out the wave locks onto the potential-only momentum sqrt(-2 V1):
//
//   u(r) ~ C (-2 V1)^(-1/4) sin( int_{R0}^r sqrt(-2 V1) dr' + D ),
//
// and the zero-energy phase shift of partial wave l is
//
//   sigma_l = D + int_{R0}^inf (sqrt(-2 V1) - sqrt(-2 V)) dr + (dim-3+2l) pi/4.
//
// D is extracted through the exact local inversion
//   u = A q^(-1/2) sin(Phi),  u' + (q'/(2q)) u = A q^(1/2) cos(Phi),
// q = sqrt(-V_k), whose phase obeys
//   Phi' = q - B/(2q) + (B/(2q)) cos(2 Phi),
//   B = q''/(2q) - (3/4)(q'/q)^2,
// so delta(r) = Phi - int q converges to its limit once the secular drift
// integral of B/(2q) is added back and the cos(2 Phi) ripple is averaged out
// over a full oscillation.  The remaining error decays as a power of r and is
// removed by fitted-exponent extrapolation along a geometric radius ladder.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "zest/errors.hpp"
#include "zest/numeric.hpp"
#include "zest/ode.hpp"
#include "zest/potential.hpp"
#include "zest/quadrature.hpp"

namespace zest {

// One accepted integration step of the reduced radial equation.  The stored
// pair (u, du) is rescaled whenever it threatens to overflow while crossing a
// classically forbidden region; the true solution at a sample is
// u * exp(log_scale) under the single global normalization above.  Ratios of
// u and du within one sample are scale-free.
struct RadialSample {
  double r;
  double u;
  double du;
  double log_scale;
};

struct RadialSolution {
  Channel channel;  // channel.r0 holds the turning point (0 when absent)
  std::vector<RadialSample> samples;
};

// Integrates the regular solution from its exact small-r form out to r_max on
// an adaptive grid.  With the interior cutoff the launch at the cutoff radius
// is exact (u = r^(l+(dim-1)/2)); for the pure homogeneous potential a
// Frobenius series in powers of r^(2-mu), truncated at second order, supplies
// the launch data at a radius small enough for the truncation to sit below
// tol.
inline RadialSolution regular_solution(const Channel& ch_in, double r_max, double tol = 1e-12) {
  Channel ch = turning_point(ch_in.model, ch_in.l);
  const PotentialModel& m = ch.model;
  if (!(tol > 0.0 && tol < 1e-2)) {
    throw validation_error("regular_solution: tol out of range (0, 1e-2)");
  }
  if (!(r_max > 4.0 * std::max(ch.r0, m.R0))) {
    throw validation_error("regular_solution: r_max must exceed 4x the turning point and 4x R0");
  }

  const double nu = ch.l + 0.5 * (m.dim - 1);  // u ~ r^nu at the origin
  double r_s = 0.0, u0 = 0.0, du0 = 0.0;
  if (m.cutoff_mode == CutoffMode::CutInterior) {
    // The potential vanishes identically below the cutoff: u = r^nu exactly.
    r_s = kCutLo;
    u0 = std::pow(r_s, nu);
    du0 = nu * std::pow(r_s, nu - 1.0);
  } else {
    // u = r^nu (1 + a1 r^d + a2 r^(2d)), d = 2-mu; the recurrence follows
    // from matching powers in -u'' + V_k u = 0 term by term.
    const double d = 2.0 - m.mu;
    const double two_lam = 2.0 * ch.k + 1.0;  // 2*(l + dim/2 - 1)
    const double a1 = -2.0 * m.gamma / (d * (two_lam + d));
    const double a2 = -2.0 * m.gamma * a1 / (2.0 * d * (two_lam + 2.0 * d));
    const double a3 = -2.0 * m.gamma * a2 / (3.0 * d * (two_lam + 3.0 * d));
    r_s = 0.4;
    const double trunc_target = 0.05 * std::max(tol, 1e-14);
    while (std::fabs(a3) * std::pow(r_s, 3.0 * d) > trunc_target && r_s > 1e-6) r_s *= 0.5;
    // Keep the oscillation phase that can accumulate below the launch radius
    // well under pi, so the anchoring of the extracted phase cannot alias by
    // a whole winding.
    while (std::sqrt(2.0 * m.gamma) * std::pow(r_s, 0.5 * d) / (0.5 * d) > 1.5 && r_s > 1e-6) {
      r_s *= 0.5;
    }
    const double rd = std::pow(r_s, d);
    u0 = std::pow(r_s, nu) * (1.0 + a1 * rd + a2 * rd * rd);
    du0 = std::pow(r_s, nu - 1.0) *
          (nu + (nu + d) * a1 * rd + (nu + 2.0 * d) * a2 * rd * rd);
  }

  RadialSolution sol;
  sol.channel = ch;
  State x{u0, du0};
  double r = r_s;
  double log_scale = 0.0;
  sol.samples.push_back({r_s, u0, du0, 0.0});

  auto sys = [&ch](const State& s, State& ds, double rr) {
    ds[0] = s[1];
    ds[1] = effective_potential(ch, rr) * s[0];
  };
  // Resolve both the geometry (5% radius change) and the local wavelength /
  // growth scale (0.3 radians of phase or e-folding per step).
  auto cap = [&ch, r_s](const State&, double rr) {
    const double vk = std::fabs(effective_potential(ch, rr));
    return std::min(0.05 * std::max(rr, r_s), 0.3 / (std::sqrt(vk) + 1e-30));
  };
  const double overflow_guard = 1e150;
  bool rescale = false;
  auto obs = [&sol, &log_scale, &rescale, overflow_guard](const State& s, double rr) {
    sol.samples.push_back({rr, s[0], s[1], log_scale});
    if (std::max(std::fabs(s[0]), std::fabs(s[1])) >= overflow_guard) {
      rescale = true;
      return StepVerdict::Stop;
    }
    return StepVerdict::Continue;
  };

  OdeOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = 1e-280;  // purely relative control: u spans hundreds of decades
  opt.t_max = r_max;
  opt.dt_init = 1e-3 * r_s;
  opt.max_steps = 5000000;

  while (true) {
    rescale = false;
    const OdeOutcome oc = integrate_capped(sys, x, r, opt, obs, cap);
    if (oc == OdeOutcome::ReachedTMax) break;
    if (oc == OdeOutcome::Stopped && rescale) {
      // Restarting the driver after the renormalization also discards the
      // stepper's cached derivative, which the rescaling would invalidate.
      const double mag = std::max(std::fabs(x[0]), std::fabs(x[1]));
      x[0] /= mag;
      x[1] /= mag;
      log_scale += std::log(mag);
      opt.dt_init = 1e-3 * std::max(r, r_s);
      continue;
    }
    throw convergence_error("regular_solution: integration stalled at r = " + std::to_string(r));
  }
  return sol;
}

// Inverts the local sine ansatz at one point: with q = sqrt(-V_k(r)),
//   u = A q^(-1/2) sin(Phi),   u' + (q'/(2q)) u = A q^(1/2) cos(Phi),
// returns {A, Phi} with Phi the principal value in (-pi, pi].  Only defined
// in the classically allowed region V_k < 0.
inline std::pair<double, double> extract_local_phase(const Channel& ch, double u, double du,
                                                     double r) {
  const double vk = effective_potential(ch, r);
  if (!(vk < 0.0)) {
    throw validation_error("extract_local_phase: classically forbidden point (V_k >= 0 at r = " +
                           std::to_string(r) + ")");
  }
  const double q = std::sqrt(-vk);
  const double dvk = effective_potential_deriv(ch, r);
  const double w = du + (dvk / (4.0 * vk)) * u;  // q'/(2q) = V_k'/(4 V_k)
  const double amp = std::hypot(q * u, w) / std::sqrt(q);
  return {amp, std::atan2(q * u, w)};
}

namespace detail {

// sqrt(-2 V1), the reference momentum of the asymptotic sine form (0 where
// the cut potential vanishes).
inline double v1_momentum(const PotentialModel& m, double r) {
  const double a = -2.0 * eval_v1(m, r);
  return a > 0.0 ? std::sqrt(a) : 0.0;
}

// int_a^b sqrt(-2 V1) dr, a <= b: closed form in the pure power-law zone,
// quadrature across the cutoff switch.
inline double v1_phase_between(const PotentialModel& m, double a, double b) {
  if (!(a <= b)) throw validation_error("v1_phase_between: endpoints out of order");
  if (a == b) return 0.0;
  auto closed = [&m](double lo, double hi) {
    const double e = 1.0 - 0.5 * m.mu;
    return std::sqrt(2.0 * m.gamma) / e * (std::pow(hi, e) - std::pow(lo, e));
  };
  if (m.cutoff_mode == CutoffMode::PureHomogeneous || a >= 1.0) return closed(a, b);
  const double mid = std::min(b, 1.0);
  const double head = integrate([&m](double rr) { return v1_momentum(m, rr); }, a, mid, {1e-12});
  return head + (b > 1.0 ? closed(1.0, b) : 0.0);
}

// int_a^inf (sqrt(-V_k) - sqrt(-2 V1)) dr, convergent because the integrand
// decays like r^(mu/2 - 2) (and r^(-mu/2 - eps2) when the subleading tail is
// present).  When a is the turning point the integrand has a sqrt-type kink
// there; the tail uses the conjugate form with the difference of potentials
// evaluated directly to avoid cancellation.
inline double momentum_defect_from(const Channel& ch, double a, bool sqrt_kink) {
  const PotentialModel& m = ch.model;
  const double kk1 = ch.kk1();
  if (kk1 == 0.0 && m.v2_beta == 0.0) return 0.0;  // V_k = 2 V1 identically
  auto direct = [&ch, &m](double rr) {
    const double vk = effective_potential(ch, rr);
    const double q = vk < 0.0 ? std::sqrt(-vk) : 0.0;
    return q - v1_momentum(m, rr);
  };
  const double b = 2.0 * std::max(a, 1.0);
  const double head = sqrt_kink ? integrate_alg_left(direct, a, b, 0.5, {1e-12})
                                : integrate(direct, a, b, {1e-12});
  auto conj = [&ch, &m, kk1](double rr) {
    const double vk = effective_potential(ch, rr);
    const double v1 = -2.0 * eval_v1(m, rr);
    const double q = vk < 0.0 ? std::sqrt(-vk) : 0.0;
    const double p1 = v1 > 0.0 ? std::sqrt(v1) : 0.0;
    const double den = q + p1;
    if (den <= 0.0) return 0.0;
    const double num = -2.0 * eval_v2(m, rr) - kk1 / (rr * rr);
    return num / den;
  };
  double p_tail = 2.0 - 0.5 * m.mu;
  if (m.v2_beta != 0.0) p_tail = std::min(p_tail, 0.5 * m.mu + m.v2_eps2);
  return head + integrate_tail(conj, b, p_tail, {1e-12});
}

// int_{R0}^inf (sqrt(-2 V1) - sqrt(-2 V)) dr, the phase defect of the
// subleading tail; identically zero when V = V1.  Conjugate form throughout:
// the numerator 2 V2 is evaluated directly, never as a difference.
inline double v1_tail_defect(const PotentialModel& m) {
  if (m.v2_beta == 0.0) return 0.0;
  auto f = [&m](double rr) {
    const double a1 = -2.0 * eval_v1(m, rr);
    const double a = a1 - 2.0 * eval_v2(m, rr);
    const double den = (a1 > 0.0 ? std::sqrt(a1) : 0.0) + (a > 0.0 ? std::sqrt(a) : 0.0);
    if (den <= 0.0) return 0.0;
    return 2.0 * eval_v2(m, rr) / den;
  };
  const double b = std::max(2.0 * m.R0, 4.0);
  const double head = integrate(f, m.R0, b, {1e-12});
  return head + integrate_tail(f, b, 0.5 * m.mu + m.v2_eps2, {1e-12});
}

// int_r^inf B/(2q) dr' with B = q''/(2q) - (3/4)(q'/q)^2 — the secular part
// of the extraction drift Phi' - q.  Valid in the pure power-law zone
// r >= max(R0, 1, r0), where -V_k and its derivatives have closed forms.
inline double phase_drift_tail(const Channel& ch, double a) {
  const PotentialModel& m = ch.model;
  const double kk1 = ch.kk1();
  auto f = [&m, kk1](double rr) {
    const double g1 = 2.0 * m.gamma * std::pow(rr, -m.mu);
    const double g2 =
        (m.v2_beta != 0.0) ? 2.0 * m.v2_beta * std::pow(rr, -m.mu - m.v2_eps2) : 0.0;
    const double e2 = m.mu + m.v2_eps2;
    const double cen = kk1 / (rr * rr);
    const double q2 = g1 + g2 - cen;  // -V_k
    if (!(q2 > 0.0)) return 0.0;
    const double q = std::sqrt(q2);
    const double d1 = (-m.mu * g1 - e2 * g2 + 2.0 * cen) / rr;
    const double d2 =
        (m.mu * (m.mu + 1.0) * g1 + e2 * (e2 + 1.0) * g2 - 6.0 * cen) / (rr * rr);
    const double qp = 0.5 * d1 / q;
    const double qpp = 0.5 * d2 / q - 0.25 * d1 * d1 / (q2 * q);
    const double B = 0.5 * qpp / q - 0.75 * (qp / q) * (qp / q);
    return 0.5 * B / q;
  };
  return integrate_tail(f, a, 2.0 - 0.5 * m.mu, {1e-11});
}

// Per-sample unwound phase along a radial solution, with the running
// momentum integral S(r) = int_{r_ref}^r q serving as both the unwinding
// predictor and the phase clock.  r_ref is the turning point when a
// centrifugal barrier exists, max(R0, 1) otherwise.
struct PhaseTrack {
  double r_ref = 0.0;
  std::vector<double> r, S, phi;
};

inline PhaseTrack track_phase(const RadialSolution& sol) {
  const Channel& ch = sol.channel;
  const PotentialModel& m = ch.model;
  PhaseTrack tr;
  const bool barrier = ch.kk1() > 0.0;
  tr.r_ref = barrier ? ch.r0 : std::max(m.R0, 1.0);

  // Anchor: the first sample safely inside the oscillatory zone.  Past a
  // barrier, skip the Airy neighborhood of the turning point; without one
  // the oscillation builds smoothly from the origin and the first sample
  // carries less than one winding by construction of the launch radius.
  const double r_anchor_min = barrier ? 1.25 * ch.r0 : 0.0;
  std::size_t i0 = sol.samples.size();
  for (std::size_t i = 0; i < sol.samples.size(); ++i) {
    if (sol.samples[i].r >= r_anchor_min && effective_potential(ch, sol.samples[i].r) < 0.0) {
      i0 = i;
      break;
    }
  }
  if (i0 + 2 >= sol.samples.size()) {
    throw regime_error("track_phase: no oscillatory samples beyond the turning point");
  }

  auto q_of = [&ch](double rr) {
    const double vk = effective_potential(ch, rr);
    return vk < 0.0 ? std::sqrt(-vk) : 0.0;
  };

  const double ra = sol.samples[i0].r;
  double S = 0.0;
  if (barrier) {
    S = integrate_alg_left(q_of, ch.r0, ra, 0.5, {1e-12});
  } else if (ra > tr.r_ref) {
    S = integrate(q_of, tr.r_ref, ra, {1e-12});
  } else if (ra < tr.r_ref) {
    S = -integrate(q_of, ra, tr.r_ref, {1e-12});
  }

  const auto& s0 = sol.samples[i0];
  double phi = extract_local_phase(ch, s0.u, s0.du, s0.r).second;
  if (barrier) {
    // Past the turning point the true phase sits within a fraction of pi of
    // pi/4 + S, so rounding to the nearest whole turn fixes the winding.
    const double guess = 0.25 * kPi + S;
    phi += 2.0 * kPi * std::round((guess - phi) / (2.0 * kPi));
  }
  tr.r.reserve(sol.samples.size() - i0);
  tr.S.reserve(sol.samples.size() - i0);
  tr.phi.reserve(sol.samples.size() - i0);
  tr.r.push_back(s0.r);
  tr.S.push_back(S);
  tr.phi.push_back(phi);

  double q_prev = q_of(s0.r);
  for (std::size_t i = i0 + 1; i < sol.samples.size(); ++i) {
    const auto& s = sol.samples[i];
    const double qi = q_of(s.r);
    S += integrate(q_of, tr.r.back(), s.r, {1e-12});
    const double principal = extract_local_phase(ch, s.u, s.du, s.r).second;
    // Step phase advances are capped well below pi, so continuity plus the
    // trapezoidal momentum prediction determines the winding uniquely.
    const double predicted = tr.phi.back() + 0.5 * (qi + q_prev) * (s.r - tr.r.back());
    tr.r.push_back(s.r);
    tr.S.push_back(S);
    tr.phi.push_back(principal + 2.0 * kPi * std::round((predicted - principal) / (2.0 * kPi)));
    q_prev = qi;
  }
  return tr;
}

// Ripple-free local value of delta = phi - S at the pivot sample: least
// squares over 1.5 periods of the cos(2 Phi) oscillation with basis
//   {1, x, cos 2x, sin 2x, x cos 2x, x sin 2x},   x = S - S0,
// which represents the ripple, the linear part of the secular drift, and the
// slow modulation of the ripple amplitude across the window.  Returns
// {constant term, true} or {0, false} when the window does not fit inside
// the track.
inline std::pair<double, bool> ripple_averaged_delta(const PhaseTrack& tr, std::size_t pivot) {
  constexpr int kN = 6;
  const double s0 = tr.S[pivot];
  const double half = 0.75 * kPi;
  if (!(tr.S.front() <= s0 - half && s0 + half <= tr.S.back())) return {0.0, false};
  const auto it_lo = std::lower_bound(tr.S.begin(), tr.S.end(), s0 - half);
  const auto it_hi = std::upper_bound(tr.S.begin(), tr.S.end(), s0 + half);
  const std::size_t ia = static_cast<std::size_t>(it_lo - tr.S.begin());
  const std::size_t ib = static_cast<std::size_t>(it_hi - tr.S.begin());
  if (ib < ia + 10) return {0.0, false};  // need headroom over the parameters

  double ata[kN][kN] = {};
  double atb[kN] = {};
  for (std::size_t i = ia; i < ib; ++i) {
    const double x = tr.S[i] - s0;
    const double c2 = std::cos(2.0 * x);
    const double s2 = std::sin(2.0 * x);
    const double b[kN] = {1.0, x, c2, s2, x * c2, x * s2};
    const double y = tr.phi[i] - tr.S[i];
    for (int p = 0; p < kN; ++p) {
      for (int q = 0; q < kN; ++q) ata[p][q] += b[p] * b[q];
      atb[p] += b[p] * y;
    }
  }
  // Gaussian elimination with partial pivoting on the normal equations.
  int perm[kN];
  for (int c = 0; c < kN; ++c) perm[c] = c;
  for (int c = 0; c < kN; ++c) {
    int best = c;
    for (int rw = c + 1; rw < kN; ++rw) {
      if (std::fabs(ata[perm[rw]][c]) > std::fabs(ata[perm[best]][c])) best = rw;
    }
    std::swap(perm[c], perm[best]);
    const double piv = ata[perm[c]][c];
    if (std::fabs(piv) < 1e-14) return {0.0, false};
    for (int rw = c + 1; rw < kN; ++rw) {
      const double f = ata[perm[rw]][c] / piv;
      for (int cc = c; cc < kN; ++cc) ata[perm[rw]][cc] -= f * ata[perm[c]][cc];
      atb[perm[rw]] -= f * atb[perm[c]];
    }
  }
  double coef[kN];
  for (int c = kN - 1; c >= 0; --c) {
    double s = atb[perm[c]];
    for (int cc = c + 1; cc < kN; ++cc) s -= ata[perm[c]][cc] * coef[cc];
    coef[c] = s / ata[perm[c]][c];
  }
  return {coef[0], true};
}

}  // namespace detail

struct PhaseShiftResult {
  enum class Method { OdeOracle, WkbClosedForm };
  double sigma = 0.0;           // zero-energy phase shift (radians, unwound)
  double D = 0.0;               // asymptotic offset against the V1-only sine form
  double r_match = 0.0;         // largest matching radius used
  double residual_decay = 0.0;  // fitted decay exponent of the matching ladder
  double uncertainty = 0.0;     // numerical error estimate for sigma
  Method method = Method::OdeOracle;
};

// Zero-energy phase shift of partial wave l by direct integration: solves the
// regular solution far out, extracts the drift-corrected, ripple-averaged
// phase offset on a geometric ladder of matching radii, extrapolates the
// ladder to r -> inf with a fitted power law, and assembles sigma from the
// momentum-defect integrals.
inline PhaseShiftResult phase_shift(const Channel& ch_in, double tol = 1e-10) {
  if (!(tol >= 1e-12 && tol < 1e-2)) {
    throw validation_error("phase_shift: tol out of range [1e-12, 1e-2)");
  }
  Channel ch = turning_point(ch_in.model, ch_in.l);
  const PotentialModel& m = ch.model;
  const bool barrier = ch.kk1() > 0.0;

  // Matching ladder base * 2^j: anchored at the outermost of the turning
  // point, R0, and the unit switch radius, so every rung sits in the far
  // oscillatory zone.
  const double base = std::max({ch.r0, m.R0, 1.0});
  const int j_lo = 6, j_hi = 11;
  const double top = base * std::pow(2.0, j_hi);
  const double vk_top = effective_potential(ch, top);
  if (!(vk_top < 0.0)) {
    throw regime_error("phase_shift: potential not attractive at the ladder top");
  }
  // Leave room beyond the top rung for its full averaging window.
  const double r_max = top * 1.02 + 4.0 * detail::kPi / std::sqrt(-vk_top);
  const double ode_tol = std::clamp(0.01 * tol, 1e-13, 1e-11);

  const RadialSolution sol = regular_solution(ch, r_max, ode_tol);
  const detail::PhaseTrack tr = detail::track_phase(sol);

  std::vector<double> rj, dj;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double target = base * std::pow(2.0, j);
    auto it = std::lower_bound(tr.r.begin(), tr.r.end(), target);
    if (it == tr.r.end()) continue;
    const std::size_t pivot = static_cast<std::size_t>(it - tr.r.begin());
    const auto [mean, ok] = detail::ripple_averaged_delta(tr, pivot);
    if (!ok) continue;
    rj.push_back(tr.r[pivot]);
    dj.push_back(mean - detail::phase_drift_tail(ch, tr.r[pivot]));
  }
  if (dj.size() < 3) {
    throw convergence_error("phase_shift: matching ladder too short (" +
                            std::to_string(dj.size()) + " rungs)");
  }

  const std::size_t n = dj.size();
  const double d1 = dj[n - 2] - dj[n - 3];
  const double d2 = dj[n - 1] - dj[n - 2];
  const double noise_floor = 1e3 * ode_tol;
  double delta_inf = 0.0, uncert = 0.0, decay = 0.0;
  if (std::fabs(d2) <= std::max(0.05 * tol, 3.0 * noise_floor)) {
    delta_inf = dj[n - 1];
    uncert = std::fabs(d2) + noise_floor;
    decay = 20.0;
  } else {
    const double rho = d2 / d1;
    if (rho > 0.0 && rho < 0.95 && std::fabs(d1) > 10.0 * noise_floor) {
      const auto est = detail::extrapolate_power(
          {{{rj[n - 3], dj[n - 3]}, {rj[n - 2], dj[n - 2]}, {rj[n - 1], dj[n - 1]}}});
      delta_inf = est.first;
      uncert = est.second + noise_floor;
      decay = -std::log2(rho);
    } else if (std::fabs(d2) <= 100.0 * tol) {
      delta_inf = dj[n - 1];
      uncert = 3.0 * std::fabs(d2) + noise_floor;
      decay = 0.0;
    } else {
      std::string msg = "phase_shift: matching ladder not converging;";
      for (std::size_t i = 0; i < n; ++i) {
        msg += " D(" + std::to_string(rj[i]) + ") = " + std::to_string(dj[i]);
      }
      throw convergence_error(msg);
    }
  }

  double defect;  // int_{r_ref}^inf (sqrt(-V_k) - sqrt(-2 V1))
  if (barrier && m.cutoff_mode == CutoffMode::PureHomogeneous && m.v2_beta == 0.0) {
    defect = std::sqrt(ch.kk1()) * (2.0 - detail::kPi) / (2.0 - m.mu);
  } else {
    defect = detail::momentum_defect_from(ch, tr.r_ref, barrier);
  }
  const double lead_in = (tr.r_ref >= m.R0)
                             ? detail::v1_phase_between(m, m.R0, tr.r_ref)
                             : -detail::v1_phase_between(m, tr.r_ref, m.R0);

  PhaseShiftResult res;
  res.D = delta_inf + defect - lead_in;
  res.sigma = res.D + detail::v1_tail_defect(m) + (m.dim - 3 + 2.0 * ch.l) * 0.25 * detail::kPi;
  res.r_match = rj.back();
  res.residual_decay = decay;
  res.uncertainty = uncert;
  res.method = PhaseShiftResult::Method::OdeOracle;
  return res;
}

// Closed-form WKB phase shift
//   sigma^WKB = -sqrt(k(k+1)) pi/(2-mu) + (k + 1/2) pi/2
//               + 2 sqrt(2 gamma)/(2-mu) R0^(1-mu/2) + tail defect,
// exact for the pure potential; with an interior cutoff the constituent
// integrals are evaluated numerically.  Accurate up to a phase offset that
// vanishes as k -> inf, and defined only when a centrifugal barrier exists.
inline PhaseShiftResult wkb_phase_shift(const Channel& ch_in) {
  Channel ch = turning_point(ch_in.model, ch_in.l);
  const PotentialModel& m = ch.model;
  if (!(ch.kk1() > 0.0)) {
    throw regime_error("wkb_phase_shift: requires a centrifugal barrier (k(k+1) > 0)");
  }
  const double tail = detail::v1_tail_defect(m);
  double sigma;
  if (m.cutoff_mode == CutoffMode::PureHomogeneous && m.v2_beta == 0.0) {
    sigma = -std::sqrt(ch.kk1()) * detail::kPi / (2.0 - m.mu) +
            (ch.k + 0.5) * 0.5 * detail::kPi +
            2.0 * std::sqrt(2.0 * m.gamma) / (2.0 - m.mu) * std::pow(m.R0, 1.0 - 0.5 * m.mu);
  } else {
    const double defect = detail::momentum_defect_from(ch, ch.r0, true);
    const double lead_in = (ch.r0 >= m.R0) ? detail::v1_phase_between(m, m.R0, ch.r0)
                                           : -detail::v1_phase_between(m, ch.r0, m.R0);
    sigma = defect - lead_in + (ch.k + 0.5) * 0.5 * detail::kPi + tail;
  }
  PhaseShiftResult res;
  res.sigma = sigma;
  res.D = sigma - tail - (m.dim - 3 + 2.0 * ch.l) * 0.25 * detail::kPi;
  res.r_match = ch.r0;
  res.residual_decay = 0.0;
  res.uncertainty = 0.0;
  res.method = PhaseShiftResult::Method::WkbClosedForm;
  return res;
}

// Offsets of computed phase shifts from the large-l asymptote
//   sigma_l = -(mu pi / (2 (2-mu))) l + c/2,
//   c/2 = -pi mu (dim-2)/(4 (2-mu)) + 2 sqrt(2 gamma)/(2-mu) R0^(1-mu/2)
//         + int_{R0}^inf (sqrt(-2 V1) - sqrt(-2 V)) dr.
// Returns sigma_l + slope*l - c/2 for each l in [l_lo, l_hi]; the entries
// tend to zero as l grows.
inline std::vector<double> asymptote_residual(const PotentialModel& m, int l_lo, int l_hi,
                                              double tol = 1e-10) {
  m.validate();
  if (!(0 <= l_lo && l_lo <= l_hi)) {
    throw validation_error("asymptote_residual: need 0 <= l_lo <= l_hi");
  }
  const double slope = m.mu * detail::kPi / (2.0 * (2.0 - m.mu));
  const double c_half =
      -detail::kPi * m.mu * (m.dim - 2) / (4.0 * (2.0 - m.mu)) +
      2.0 * std::sqrt(2.0 * m.gamma) / (2.0 - m.mu) * std::pow(m.R0, 1.0 - 0.5 * m.mu) +
      detail::v1_tail_defect(m);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(l_hi - l_lo + 1));
  for (int l = l_lo; l <= l_hi; ++l) {
    out.push_back(phase_shift(turning_point(m, l), tol).sigma + slope * l - c_half);
  }
  return out;
}

struct WkbFormFit {
  double offset;  // fitted constant phase offset beyond the pi/4 of the sine form
  double rms;     // root-mean-square phase residual about that constant
};

// Fits the regular solution over [r_lo, r_hi] against the one-parameter form
//   u ~ A (-V_k)^(-1/4) sin( int_{r0}^r sqrt(-V_k) + pi/4 + offset ),
// returning the fitted offset and the scatter of the per-sample phase about
// it.  Requires a centrifugal barrier and a window beyond the turning point.
inline WkbFormFit wkb_form_residual(const Channel& ch_in, double r_lo, double r_hi,
                                    double tol = 1e-12) {
  Channel ch = turning_point(ch_in.model, ch_in.l);
  if (!(ch.kk1() > 0.0)) {
    throw regime_error("wkb_form_residual: requires a centrifugal barrier (k(k+1) > 0)");
  }
  if (!(r_lo > ch.r0 && r_lo < r_hi)) {
    throw validation_error("wkb_form_residual: window must sit beyond the turning point");
  }
  const double r_max = std::max(1.02 * r_hi, 4.001 * std::max(ch.r0, ch.model.R0));
  const RadialSolution sol = regular_solution(ch, r_max, tol);
  const detail::PhaseTrack tr = detail::track_phase(sol);
  double sum = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < tr.r.size(); ++i) {
    if (tr.r[i] < r_lo || tr.r[i] > r_hi) continue;
    sum += tr.phi[i] - tr.S[i] - 0.25 * detail::kPi;
    ++cnt;
  }
  if (cnt < 8) {
    throw validation_error("wkb_form_residual: window too narrow (fewer than 8 samples)");
  }
  const double mean = sum / static_cast<double>(cnt);
  double ss = 0.0;
  for (std::size_t i = 0; i < tr.r.size(); ++i) {
    if (tr.r[i] < r_lo || tr.r[i] > r_hi) continue;
    const double d = tr.phi[i] - tr.S[i] - 0.25 * detail::kPi - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(cnt))};
}

}  // namespace zest
