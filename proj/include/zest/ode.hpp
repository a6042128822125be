#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "zest/errors.hpp"

namespace zest {

using State = std::vector<double>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double dt_init = 1e-4;
  double t_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50000000;
};

enum class StepVerdict { Continue, Stop };

enum class OdeOutcome {
  ReachedTMax,    // integrated up to opt.t_max
  Stopped,        // observer requested stop
  StepUnderflow,  // dt shrank below time resolution (e.g. near-collision)
};

// Adaptive embedded Runge–Kutta (Dormand–Prince 5(4)) driver.
//
// sys(x, dxdt, t) evaluates the right-hand side.  After every accepted step
// observe(x, t) runs and may stop the integration.  dt_cap(x, t) bounds the
// next attempted step; pass +inf for no cap.  Step-size underflow is reported
// as an outcome, not an error — callers decide whether it is meaningful
// (a near-collision) or a failure.
template <class Sys, class Obs, class Cap>
OdeOutcome integrate_capped(Sys&& sys, State& x, double& t, OdeOptions opt, Obs&& observe,
                            Cap&& dt_cap) {
  namespace od = boost::numeric::odeint;
  // The error weight for component i is abs_tol + rel_tol*(|x_i| + |dt*dx_i|);
  // including the derivative term keeps the control purely relative across
  // zero crossings and across states whose components span many decades.
  using ErrStepper = od::runge_kutta_dopri5<State>;
  using Checker = od::default_error_checker<double, od::range_algebra, od::default_operations>;
  od::controlled_runge_kutta<ErrStepper, Checker> stepper(
      Checker(opt.abs_tol, opt.rel_tol, 1.0, 1.0));
  double dt = opt.dt_init;
  std::size_t steps = 0;
  while (t < opt.t_max) {
    const double cap = std::min(dt_cap(x, t), opt.t_max - t);
    if (!(cap > 0.0)) return OdeOutcome::StepUnderflow;
    double dt_try = std::min(dt, cap);
    if (t + dt_try == t) return OdeOutcome::StepUnderflow;
    const auto result = stepper.try_step(sys, x, t, dt_try);
    if (result == od::fail) {
      dt = dt_try;  // shrunken suggestion from the controller
      if (t + dt == t) return OdeOutcome::StepUnderflow;
    } else {
      dt = dt_try;  // grown suggestion from the controller
      if (observe(x, t) == StepVerdict::Stop) return OdeOutcome::Stopped;
    }
    if (++steps > opt.max_steps) {
      throw convergence_error("integrate_capped: step budget exhausted at t = " +
                              std::to_string(t));
    }
  }
  return OdeOutcome::ReachedTMax;
}

template <class Sys, class Obs>
OdeOutcome integrate_observed(Sys&& sys, State& x, double& t, OdeOptions opt, Obs&& observe) {
  auto no_cap = [](const State&, double) { return std::numeric_limits<double>::infinity(); };
  return integrate_capped(sys, x, t, opt, observe, no_cap);
}

}  // namespace zest
