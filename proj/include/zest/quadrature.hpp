#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zest/errors.hpp"

namespace zest {

struct QuadOptions {
  double rel_tol = 1e-12;   // requested relative accuracy
  unsigned max_depth = 15;  // adaptive bisection depth per subinterval
};

namespace detail {

struct QuadCell {
  double a, b;       // subinterval
  double value;      // K15 estimate, width-scaled
  double error;      // |K15 - G7| estimate, width-scaled
  double l1;         // L1 norm estimate, width-scaled
  unsigned depth;    // bisection generation
  bool operator<(const QuadCell& o) const { return error < o.error; }
};

}  // namespace detail

// Globally adaptive Gauss–Kronrod (G7/K15) integration of a smooth integrand
// over a finite interval: the subinterval with the largest scaled error
// estimate is bisected until the summed error meets the tolerance.
// Integrands with algebraic endpoint behavior or an infinite range must go
// through the substitution wrappers below — bisection alone stalls on
// endpoint singularities.
template <class F>
double integrate(F&& f, double a, double b, QuadOptions opt = {}) {
  if (a == b) return 0.0;
  if (!(a < b)) throw validation_error("integrate: interval endpoints out of order");

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto eval_cell = [&f](double lo, double hi, unsigned depth) {
    detail::QuadCell c;
    c.a = lo;
    c.b = hi;
    c.depth = depth;
    double err = 0.0, l1 = 0.0;
    c.value = GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    // The single-shot kernel reports its error in the units of the mapped
    // [-1,1] integrand; scale by the half-width to make it an estimate of the
    // integral's error.
    c.error = err * 0.5 * (hi - lo);
    c.l1 = l1;
    return c;
  };

  std::priority_queue<detail::QuadCell> active;  // splittable, largest error first
  double done_value = 0.0, done_error = 0.0, done_l1 = 0.0;
  double act_value = 0.0, act_error = 0.0, act_l1 = 0.0;

  auto classify = [&](detail::QuadCell&& c) {
    // A cell whose error sits at the rounding floor, or that has reached the
    // depth limit, is retired: further bisection cannot improve it.
    const bool floor = c.error <= 50.0 * std::numeric_limits<double>::epsilon() * c.l1;
    if (floor || c.depth >= opt.max_depth) {
      done_value += c.value;
      done_error += c.error;
      done_l1 += c.l1;
    } else {
      act_value += c.value;
      act_error += c.error;
      act_l1 += c.l1;
      active.push(std::move(c));
    }
  };

  classify(eval_cell(a, b, 0));
  const std::size_t max_cells = 2048;
  std::size_t n_cells = 1;
  const auto budget = [&] {
    const double scale =
        std::max({std::fabs(done_value + act_value), 1e-3 * (done_l1 + act_l1), 1e-300});
    return opt.rel_tol * scale;
  };
  while (!active.empty() && done_error + act_error > budget() && n_cells < max_cells) {
    detail::QuadCell worst = active.top();
    active.pop();
    act_value -= worst.value;
    act_error -= worst.error;
    act_l1 -= worst.l1;
    const double mid = 0.5 * (worst.a + worst.b);
    classify(eval_cell(worst.a, mid, worst.depth + 1));
    classify(eval_cell(mid, worst.b, worst.depth + 1));
    ++n_cells;
  }

  const double v = done_value + act_value;
  const double err = done_error + act_error;
  const double scale = std::max({std::fabs(v), 1e-3 * (done_l1 + act_l1), 1e-300});
  if (err > 100.0 * opt.rel_tol * scale) {
    throw convergence_error("integrate: error estimate " + std::to_string(err) +
                            " exceeds tolerance on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "] (value " + std::to_string(v) + ")");
  }
  return v;
}

namespace detail {

// Substitution exponent n for absorbing an (x-a)^pa endpoint factor via
// x = a + u^n.  Integer and half-integer pa (the turning-point sqrt family)
// map to exactly smooth integrands with n = 2; generic exponents get an n
// large enough that the transformed integrand is C^2 at the endpoint, which
// adaptive G7/K15 resolves well past 1e-12.
inline int alg_exponent(double pa) {
  const double half_steps = 2.0 * pa;
  if (std::fabs(half_steps - std::round(half_steps)) < 1e-12) {
    const bool integer = std::fabs(pa - std::round(pa)) < 1e-12;
    return integer ? 1 : 2;
  }
  return static_cast<int>(std::ceil(3.0 / (1.0 + pa)));
}

}  // namespace detail

// ∫_a^b f whose expansion at x→a runs in powers (x-a)^(pa+j); pa is the
// lowest negative or non-integer exponent present (pa > -1).  A bounded
// integrand with a sqrt-type expansion (x-a)^(j/2) declares pa = 1/2.
template <class F>
double integrate_alg_left(F&& f, double a, double b, double pa, QuadOptions opt = {}) {
  if (!(pa > -1.0)) throw validation_error("integrate_alg_left: endpoint exponent must exceed -1");
  if (a == b) return 0.0;
  const int n = detail::alg_exponent(pa);
  if (n == 1) return integrate(f, a, b, opt);
  const double dn = n;
  auto g = [&f, a, dn](double u) {
    return f(a + std::pow(u, dn)) * dn * std::pow(u, dn - 1.0);
  };
  return integrate(g, 0.0, std::pow(b - a, 1.0 / dn), opt);
}

// ∫_a^b f where f(x) ~ c·(b-x)^pb as x→b, pb > -1.
template <class F>
double integrate_alg_right(F&& f, double a, double b, double pb, QuadOptions opt = {}) {
  if (!(pb > -1.0)) throw validation_error("integrate_alg_right: endpoint exponent must exceed -1");
  if (a == b) return 0.0;
  const int n = detail::alg_exponent(pb);
  if (n == 1) return integrate(f, a, b, opt);
  const double dn = n;
  auto g = [&f, b, dn](double u) {
    return f(b - std::pow(u, dn)) * dn * std::pow(u, dn - 1.0);
  };
  return integrate(g, 0.0, std::pow(b - a, 1.0 / dn), opt);
}

// ∫_a^b f with algebraic behavior at both ends (split at the midpoint).
template <class F>
double integrate_alg(F&& f, double a, double b, double pa, double pb, QuadOptions opt = {}) {
  const double m = 0.5 * (a + b);
  return integrate_alg_left(f, a, m, pa, opt) + integrate_alg_right(f, m, b, pb, opt);
}

// ∫_a^∞ f where f(x) ~ c·x^(-p) as x→∞, p > 1, a > 0.
// x = a·u^(-1/(p-1)) maps the tail onto u ∈ (0, 1] with a bounded integrand.
template <class F>
double integrate_tail(F&& f, double a, double p, QuadOptions opt = {}) {
  if (!(p > 1.0)) throw validation_error("integrate_tail: decay exponent must exceed 1");
  if (!(a > 0.0)) throw validation_error("integrate_tail: lower endpoint must be positive");
  const double e = 1.0 / (p - 1.0);
  auto g = [&f, a, e](double u) {
    const double x = a * std::pow(u, -e);
    return f(x) * a * e * std::pow(u, -e - 1.0);
  };
  return integrate(g, 0.0, 1.0, opt);
}

}  // namespace zest
