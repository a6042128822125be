#pragma once

// Phase modifiers for zero-energy scattering with an attractive power-law
// tail: the short-range modifier (defect of the free phase against the
// interacting one) and the Dollard modifier (the same with the first Born
// term removed), their small-lambda asymptotics with explicit constants, and
// the unimodular factors linking the modified scattering operators to the
// plain one.
//
// Both modifiers are stored as real integrals over r in (R0, inf):
//   sr:  integral of  sqrt(2 lambda) - sqrt(2 lambda - 2 V1(r))
//   dol: integral of  sqrt(2 lambda) - sqrt(2 lambda - 2 V1(r)) - V1(r)/sqrt(2 lambda)
// and the operator factors are e^{-2 i psi} with psi real.  The model keeps
// R0 >= 1, where the radial part is exactly -gamma r^(-mu), so rescaling to
// s = r (2 lambda)^(1/mu) turns both into
//   psi = (2 lambda)^(1/2 - 1/mu) * integral_{a}^{inf} G(s) ds,
//   a = R0 (2 lambda)^(1/mu),  x(s) = 2 gamma s^(-mu),
//   G_sr  = 1 - sqrt(1+x)           = -x / (1 + sqrt(1+x))
//   G_dol = 1 - sqrt(1+x) + x/2     = (x^2/4) / (1 + x/2 + sqrt(1+x)),
// where the right-hand forms are exact conjugations free of subtractive
// cancellation.  The head (a, s0) with s0 the x = 1 balance point is
// integrated in u = ln s (the power-law stretch over many decades becomes a
// smooth exponential); the tail uses the algebraic-decay substitution.

#include <cmath>
#include <complex>
#include <string>

#include "zest/errors.hpp"
#include "zest/numeric.hpp"
#include "zest/potential.hpp"
#include "zest/quadrature.hpp"

namespace zest {

// Asymptotic regime of a phase modifier, fixed by the tail exponent.
enum class PhaseRegime { ShortRange, DollardMid, DollardLow };

inline const char* to_string(PhaseRegime r) {
  switch (r) {
    case PhaseRegime::ShortRange: return "short-range";
    case PhaseRegime::DollardMid: return "dollard-mid";
    case PhaseRegime::DollardLow: return "dollard-low";
  }
  return "short-range";
}

// A modifier value together with its leading small-lambda asymptotic.
struct PhaseModifierResult {
  double lambda = 0.0;
  double value = 0.0;
  double asymptotic_value = 0.0;
  PhaseRegime regime = PhaseRegime::ShortRange;
};

namespace detail {

inline void check_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0))
    throw validation_error(std::string(who) + ": lambda must be positive");
}

// integral_a^inf G(s) ds for a scaled defect integrand G decaying like
// s^(-p_tail): log-substituted head up to the balance point s0, algebraic
// tail beyond.
template <class G>
double scaled_defect_integral(G&& g, double a, double s0, double p_tail, double tol) {
  const QuadOptions opt{tol, 15};
  if (a >= s0) return integrate_tail(g, a, p_tail, opt);
  auto head = [&g](double u) {
    const double s = std::exp(u);
    return g(s) * s;
  };
  return integrate(head, std::log(a), std::log(s0), opt) +
         integrate_tail(g, s0, p_tail, opt);
}

}  // namespace detail

// Short-range phase modifier: integral over (R0, inf) of
// sqrt(2 lambda) - sqrt(2 lambda - 2 V1(r)); negative for attractive tails.
// Needs mu > 1, or the defect integral diverges at infinity.
inline double psi_sr(const PotentialModel& m, double lambda, double tol = 1e-12) {
  if (!(m.mu > 1.0))
    throw regime_error(
        "psi_sr: the short-range modifier needs tail exponent mu > 1; the defect integral "
        "diverges for mu <= 1 (use the Dollard modifier there)");
  detail::check_lambda(lambda, "psi_sr");
  const double gamma = m.gamma, mu = m.mu;
  auto g = [gamma, mu](double s) {
    const double x = 2.0 * gamma * std::pow(s, -mu);
    return -x / (1.0 + std::sqrt(1.0 + x));
  };
  if (gamma == 0.0) return 0.0;
  const double a = m.R0 * std::pow(2.0 * lambda, 1.0 / mu);
  const double s0 = std::pow(2.0 * gamma, 1.0 / mu);
  return std::pow(2.0 * lambda, 0.5 - 1.0 / mu) *
         detail::scaled_defect_integral(g, a, s0, mu, tol);
}

// Dollard phase modifier: integral over (R0, inf) of
// sqrt(2 lambda) - sqrt(2 lambda - 2 V1(r)) - V1(r)/sqrt(2 lambda); positive,
// decaying like r^(-2 mu), integrable for mu > 1/2.
inline double psi_dol(const PotentialModel& m, double lambda, double tol = 1e-12) {
  if (!(m.mu > 0.5 && m.mu < 2.0))
    throw regime_error(
        "psi_dol: the Dollard modifier needs tail exponent mu in (1/2, 2); the integrand "
        "decays like r^(-2 mu) and stops being integrable at mu = 1/2");
  detail::check_lambda(lambda, "psi_dol");
  const double gamma = m.gamma, mu = m.mu;
  auto g = [gamma, mu](double s) {
    const double x = 2.0 * gamma * std::pow(s, -mu);
    return 0.25 * x * x / (1.0 + 0.5 * x + std::sqrt(1.0 + x));
  };
  if (gamma == 0.0) return 0.0;
  const double a = m.R0 * std::pow(2.0 * lambda, 1.0 / mu);
  const double s0 = std::pow(2.0 * gamma, 1.0 / mu);
  return std::pow(2.0 * lambda, 0.5 - 1.0 / mu) *
         detail::scaled_defect_integral(g, a, s0, 2.0 * mu, tol);
}

// Scaling constant of the short-range modifier, integral over (0, inf) of
// 1 - sqrt(1 + 2 gamma s^(-mu)); the modifier behaves like
// (2 lambda)^(1/2 - 1/mu) times this constant plus an order-one boundary
// term.  Needs mu > 1.
inline double sr_asymptotic_constant(const PotentialModel& m, double tol = 1e-12) {
  if (!(m.mu > 1.0))
    throw regime_error("sr_asymptotic_constant: needs tail exponent mu > 1");
  const QuadOptions opt{tol, 15};
  const double gamma = m.gamma, mu = m.mu;
  if (gamma == 0.0) return 0.0;
  auto g = [gamma, mu](double s) {
    const double x = 2.0 * gamma * std::pow(s, -mu);
    return -x / (1.0 + std::sqrt(1.0 + x));
  };
  const double s0 = std::pow(2.0 * gamma, 1.0 / mu);  // where x = 1
  return integrate_alg_left(g, 0.0, s0, -0.5 * mu, opt) + integrate_tail(g, s0, mu, opt);
}

// Leading asymptotic constant of the Dollard modifier, per regime:
//   mu in (1/2, 1): C_mu = integral over (0, inf) of 1 - sqrt(1+2 gamma s^-mu) + gamma s^-mu
//   mu = 1:         C_1 = that integrand from 1 out, the Born-free integrand
//                   from 0 to 1, minus gamma ln R0
//   mu in (1, 2):   gamma R0^(1-mu) / (mu - 1)  (closed form)
struct AsymptoticConstants {
  PhaseRegime regime = PhaseRegime::ShortRange;
  double value = 0.0;
};

inline AsymptoticConstants asymptotic_constants(const PotentialModel& m, double tol = 1e-12) {
  if (!(m.mu > 0.5 && m.mu < 2.0))
    throw regime_error("asymptotic_constants: needs tail exponent mu in (1/2, 2)");
  const QuadOptions opt{tol, 15};
  const double gamma = m.gamma, mu = m.mu;
  // 1 - sqrt(1+x) + x/2 = (x^2/4) / (1 + x/2 + sqrt(1+x)), exact conjugate form.
  auto g = [gamma, mu](double s) {
    const double x = 2.0 * gamma * std::pow(s, -mu);
    return 0.25 * x * x / (1.0 + 0.5 * x + std::sqrt(1.0 + x));
  };
  AsymptoticConstants out;
  if (mu > 1.0) {
    out.regime = PhaseRegime::ShortRange;
    out.value = gamma * std::pow(m.R0, 1.0 - mu) / (mu - 1.0);
  } else if (mu == 1.0) {
    out.regime = PhaseRegime::DollardMid;
    if (gamma == 0.0) return out;
    auto h = [gamma](double s) {
      const double x = 2.0 * gamma / s;
      return -x / (1.0 + std::sqrt(1.0 + x));
    };
    out.value = integrate_tail(g, 1.0, 2.0, opt) +
                integrate_alg_left(h, 0.0, 1.0, -0.5, opt) - gamma * std::log(m.R0);
  } else {
    out.regime = PhaseRegime::DollardLow;
    if (gamma == 0.0) return out;
    const double s0 = std::pow(2.0 * gamma, 1.0 / mu);
    out.value = integrate_alg_left(g, 0.0, s0, -mu, opt) +
                integrate_tail(g, s0, 2.0 * mu, opt);
  }
  return out;
}

// Short-range modifier with its leading scaling asymptotic
// (2 lambda)^(1/2 - 1/mu) * sr_asymptotic_constant.  The next term of the
// expansion is an order-one constant, so the relative gap closes only like
// lambda^(1/mu - 1/2).
inline PhaseModifierResult psi_sr_result(const PotentialModel& m, double lambda,
                                         double tol = 1e-12) {
  PhaseModifierResult r;
  r.lambda = lambda;
  r.value = psi_sr(m, lambda, tol);
  r.regime = PhaseRegime::ShortRange;
  r.asymptotic_value =
      std::pow(2.0 * lambda, 0.5 - 1.0 / m.mu) * sr_asymptotic_constant(m, tol);
  return r;
}

// Dollard modifier with its leading small-lambda asymptotic:
//   mu in (1/2, 1): (2 lambda)^(1/2 - 1/mu) C_mu
//   mu = 1:         (2 lambda)^(-1/2) (-gamma ln(2 lambda) + C_1)
//   mu in (1, 2):   (2 lambda)^(-1/2) gamma R0^(1-mu) / (mu - 1)
// The mu = 1 middle regime is selected by exact equality; nearby exponents
// use the generic branches, whose constants degrade as mu -> 1.
inline PhaseModifierResult psi_dol_result(const PotentialModel& m, double lambda,
                                          double tol = 1e-12) {
  PhaseModifierResult r;
  r.lambda = lambda;
  r.value = psi_dol(m, lambda, tol);
  const AsymptoticConstants c = asymptotic_constants(m, tol);
  r.regime = c.regime;
  switch (c.regime) {
    case PhaseRegime::DollardLow:
      r.asymptotic_value = std::pow(2.0 * lambda, 0.5 - 1.0 / m.mu) * c.value;
      break;
    case PhaseRegime::DollardMid:
      r.asymptotic_value =
          (-m.gamma * std::log(2.0 * lambda) + c.value) / std::sqrt(2.0 * lambda);
      break;
    case PhaseRegime::ShortRange:
      r.asymptotic_value = c.value / std::sqrt(2.0 * lambda);
      break;
  }
  return r;
}

// Unimodular factor e^{-2 i psi_dol(lambda)} relating the Dollard-modified
// scattering operator to the plain one at energy lambda.
inline std::complex<double> sdol_phase_factor(const PotentialModel& m, double lambda,
                                              double tol = 1e-12) {
  return std::polar(1.0, -2.0 * psi_dol(m, lambda, tol));
}

// Unimodular factor e^{-2 i psi_sr(lambda)} for the short-range modifier.
inline std::complex<double> ssr_phase_factor(const PotentialModel& m, double lambda,
                                             double tol = 1e-12) {
  return std::polar(1.0, -2.0 * psi_sr(m, lambda, tol));
}

}  // namespace zest
