#pragma once

#include <stdexcept>
#include <string>

namespace zest {

// Bad argument values, violated preconditions, malformed configuration.
class validation_error : public std::invalid_argument {
public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// A requested quantity exists only in a different parameter regime
// (e.g. a phase modifier evaluated outside its admissible exponent range).
class regime_error : public std::domain_error {
public:
  explicit regime_error(const std::string& what) : std::domain_error(what) {}
};

// An iterative scheme (quadrature, ODE step control, extrapolation ladder,
// root bracketing) failed to reach its tolerance; the message carries the
// diagnostics of the failing run.
class convergence_error : public std::runtime_error {
public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A classical orbit fell toward the center faster than the integrator could
// resolve (step-size underflow); carries the smallest radius reached.
class near_collision_error : public std::runtime_error {
public:
  near_collision_error(const std::string& what, double closest)
      : std::runtime_error(what), closest_approach(closest) {}
  double closest_approach;
};

// A file could not be read or written; the message carries the path.
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zest
