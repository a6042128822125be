#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zest/quadrature.hpp"
#include "zest/roots.hpp"

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("smooth finite-interval quadrature hits closed forms") {
  auto s = zest::integrate([](double x) { return std::sin(x); }, 0.0, kPi);
  REQUIRE(std::fabs(s - 2.0) < 1e-14);

  auto e = zest::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  REQUIRE(std::fabs(e - (std::exp(1.0) - 1.0)) < 1e-14);

  REQUIRE(zest::integrate([](double x) { return x; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("left-endpoint algebraic singularities are absorbed exactly") {
  auto a = zest::integrate_alg_left([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, -0.5);
  REQUIRE(std::fabs(a - 2.0) < 1e-13);

  auto b = zest::integrate_alg_left([](double x) { return std::pow(x, -0.75); }, 0.0, 1.0, -0.75);
  REQUIRE(std::fabs(b - 4.0) < 1e-12);

  // polynomial factor on top of the singular one
  auto c = zest::integrate_alg_left(
      [](double x) { return (1.0 + x + x * x) / std::sqrt(x); }, 0.0, 1.0, -0.5);
  REQUIRE(std::fabs(c - (2.0 + 2.0 / 3.0 + 2.0 / 5.0)) < 1e-13);

  // generic (non-half-integer) exponent
  auto d = zest::integrate_alg_left([](double x) { return std::pow(x, 0.3); }, 0.0, 1.0, 0.3);
  REQUIRE(std::fabs(d - 1.0 / 1.3) < 1e-12);

  // offset interval
  auto f = zest::integrate_alg_left([](double x) { return 1.0 / std::sqrt(x - 2.0); }, 2.0, 3.0, -0.5);
  REQUIRE(std::fabs(f - 2.0) < 1e-13);
}

TEST_CASE("right-endpoint and two-sided algebraic singularities") {
  auto a = zest::integrate_alg_right([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, -0.5);
  REQUIRE(std::fabs(a - 2.0) < 1e-13);

  // ∫_0^1 e^x/sqrt(1-x) dx = e*sqrt(pi)*erf(1)
  auto b = zest::integrate_alg_right(
      [](double x) { return std::exp(x) / std::sqrt(1.0 - x); }, 0.0, 1.0, -0.5);
  const double ref_b = std::exp(1.0) * std::sqrt(kPi) * std::erf(1.0);
  REQUIRE(std::fabs(b - ref_b) < 1e-12);

  // Beta(1/2, 1/2) = pi
  auto c = zest::integrate_alg(
      [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0, -0.5, -0.5);
  REQUIRE(std::fabs(c - kPi) < 1e-12);

  // Beta(1/4, 3/4) = pi*sqrt(2)
  auto d = zest::integrate_alg(
      [](double x) { return std::pow(x, -0.75) * std::pow(1.0 - x, -0.25); }, 0.0, 1.0, -0.75, -0.25);
  REQUIRE(std::fabs(d - kPi * std::sqrt(2.0)) < 1e-11);
}

TEST_CASE("power-law tails are mapped onto a finite interval") {
  auto a = zest::integrate_tail([](double x) { return 1.0 / (x * x); }, 1.0, 2.0);
  REQUIRE(std::fabs(a - 1.0) < 1e-13);

  auto b = zest::integrate_tail([](double x) { return 1.0 / (1.0 + x * x); }, 1.0, 2.0);
  REQUIRE(std::fabs(b - kPi / 4.0) < 1e-13);

  auto c = zest::integrate_tail([](double x) { return std::pow(x, -1.5); }, 2.0, 1.5);
  REQUIRE(std::fabs(c - std::sqrt(2.0)) < 1e-13);

  // mixed fractional decay on top of the declared leading power
  auto d = zest::integrate_tail(
      [](double x) { return std::pow(x, -1.5) + std::pow(x, -2.25); }, 1.0, 1.5);
  REQUIRE(std::fabs(d - (2.0 + 0.8)) < 1e-11);
}

// The scaled momentum-defect integral behind the semiclassical phase shift:
// ∫_1^∞ ( sqrt(r^-mu - r^-2) - sqrt(r^-mu) ) dr = (2 - pi)/(2 - mu).
// Square-root vanishing at r = 1 plus a slowly decaying tail — the composite
// exercise the wrappers exist for.
TEST_CASE("turning-point/tail composite integral matches its closed form") {
  for (double mu : {0.5, 1.0, 1.5}) {
    // conjugate form of sqrt(r^-mu - r^-2) - sqrt(r^-mu): no cancellation at
    // large r, where the naive difference loses all significant digits
    auto f = [mu](double r) {
      const double lead = std::pow(r, -0.5 * mu);
      const double root = std::sqrt(std::max(std::pow(r, -mu) - std::pow(r, -2.0), 0.0));
      return -std::pow(r, -2.0) / (root + lead);
    };
    const double head = zest::integrate_alg_left(f, 1.0, 2.0, 0.5);
    const double tail = zest::integrate_tail(f, 2.0, 2.0 - 0.5 * mu);
    const double ref = (2.0 - kPi) / (2.0 - mu);
    REQUIRE(std::fabs(head + tail - ref) < 1e-10);
  }
}

TEST_CASE("quadrature rejects malformed requests") {
  auto one = [](double) { return 1.0; };
  REQUIRE_THROWS_AS(zest::integrate(one, 1.0, 0.0), zest::validation_error);
  REQUIRE_THROWS_AS(zest::integrate_alg_left(one, 0.0, 1.0, -1.0), zest::validation_error);
  REQUIRE_THROWS_AS(zest::integrate_alg_right(one, 0.0, 1.0, -1.5), zest::validation_error);
  REQUIRE_THROWS_AS(zest::integrate_tail(one, 1.0, 1.0), zest::validation_error);
  REQUIRE_THROWS_AS(zest::integrate_tail(one, 0.0, 2.0), zest::validation_error);
  REQUIRE_THROWS_AS(zest::integrate_tail(one, -1.0, 2.0), zest::validation_error);
}

TEST_CASE("unresolved endpoint singularity raises a convergence error") {
  // x^-0.9 on (0,1] is integrable but hopeless for plain adaptive bisection;
  // the engine must report failure instead of returning a bad value.
  REQUIRE_THROWS_AS(
      zest::integrate([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0),
      zest::convergence_error);
}

TEST_CASE("bracketed root finding agrees with bisection") {
  auto f = [](double x) { return std::cos(x); };
  const double r1 = zest::find_root(f, 0.0, 2.0);
  REQUIRE(std::fabs(r1 - kPi / 2.0) < 1e-12);
  const double r2 = zest::bisect(f, 0.0, 2.0);
  REQUIRE(std::fabs(r1 - r2) < 1e-12);

  auto g = [](double x) { return x * x * x - 2.0; };
  REQUIRE(std::fabs(zest::find_root(g, 1.0, 2.0) - std::cbrt(2.0)) < 1e-12);

  REQUIRE_THROWS_AS(zest::find_root(f, 0.0, 1.0), zest::validation_error);
  REQUIRE_THROWS_AS(zest::bisect(f, 0.0, 1.0), zest::validation_error);
}
