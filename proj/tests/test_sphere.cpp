// Tests for the sphere-kernel module: orthogonal polynomials against their
// generating functions, projection kernels against sphere quadrature, kernel
// synthesis against the exact closed form of the damped series, peak
// location, and the residuals against the rotation limit.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "zest/sphere.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

// 64-node Gauss–Legendre rule on [-1, 1] (exact through polynomial degree 127).
const std::pair<std::vector<double>, std::vector<double>>& gl64() {
  static const auto rule = [] {
    using G = boost::math::quadrature::gauss<double, 64>;
    std::pair<std::vector<double>, std::vector<double>> r;
    for (std::size_t i = 0; i < G::abscissa().size(); ++i) {
      r.first.push_back(G::abscissa()[i]);
      r.second.push_back(G::weights()[i]);
      r.first.push_back(-G::abscissa()[i]);
      r.second.push_back(G::weights()[i]);
    }
    return r;
  }();
  return rule;
}

// Integral over the unit 2-sphere: Gauss–Legendre in cos(polar) x uniform
// (trapezoid) in azimuth, exact for the band-limited integrands used here.
template <class F>
double sphere_integral_3d(F&& f) {
  const auto& [u, wt] = gl64();
  const int m_phi = 64;
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double su = std::sqrt(std::max(0.0, 1.0 - u[i] * u[i]));
    double ring = 0.0;
    for (int m = 0; m < m_phi; ++m) {
      const double phi = 2.0 * kPi * m / m_phi;
      ring += f(su * std::cos(phi), su * std::sin(phi), u[i]);
    }
    total += wt[i] * ring * (2.0 * kPi / m_phi);
  }
  return total;
}

// Exact value of the Abel-damped rotation-kernel series
// sum_l t^l e^{i theta (l + d/2 - 1)} Q_l(w): substituting the complex angle
// zeta = theta + i s with s = -ln t turns the damping into the convergence
// factor of the series, whose sum has the closed form
// t^{-(d/2-1)} (-i) sin(zeta) Gamma(d/2) (2 pi)^{-d/2} (cos(zeta) - w)^{-d/2}.
// The power is the analytic continuation in theta from (-pi, pi): the curve
// cos(theta + i s) - w encircles the origin clockwise once per full turn of
// theta (cosh s > |w|), so each turn multiplies the principal branch by
// e^{i pi d} — a sign flip in odd dimensions.  Valid away from odd multiples
// of pi, where the base touches the branch cut.
cplx damped_series_exact(int d, double theta, double t, double w) {
  const double s = -std::log(t);
  const cplx zeta(theta, s);
  const double nu = 0.5 * d - 1.0;
  const cplx base = std::cos(zeta) - w;
  const double turns = std::floor((theta + kPi) / (2.0 * kPi));
  return std::polar(1.0, kPi * d * turns) * std::pow(t, -nu) * cplx(0.0, -1.0) *
         std::sin(zeta) * std::tgamma(0.5 * d) * std::pow(2.0 * kPi, -0.5 * d) *
         std::pow(base, cplx(-0.5 * d, 0.0));
}

// Direct evaluation of the damped series at a single w through the public
// per-order kernel (no shared code with the grid synthesis loop).
cplx damped_series_direct(int d, double theta, double t, double w, int l_max) {
  cplx acc = 0.0;
  double damp = 1.0;
  for (int l = 0; l <= l_max; ++l) {
    acc += damp * std::polar(1.0, theta * (l + 0.5 * d - 1.0)) *
           zest::projection_kernel(d, l, w);
    damp *= t;
  }
  return acc;
}

zest::PotentialModel pure_model(double gamma, double mu) {
  zest::PotentialModel m;
  m.gamma = gamma;
  m.mu = mu;
  m.cutoff_mode = zest::CutoffMode::PureHomogeneous;
  return m;
}

}  // namespace

TEST_CASE("tchebyshev matches its trigonometric definition") {
  CHECK(zest::tchebyshev(0, 0.37) == 1.0);
  // w = cos(pi/3): T_3 = cos(pi) = -1 exactly up to rounding.
  CHECK(zest::tchebyshev(3, 0.5) == Catch::Approx(-1.0).margin(1e-14));
  for (int n = 0; n <= 10; ++n) {
    for (double phi : {0.2, 0.9, 1.7, 2.8}) {
      CHECK(zest::tchebyshev(n, std::cos(phi)) ==
            Catch::Approx(std::cos(n * phi)).margin(1e-12));
    }
  }
  CHECK_THROWS_AS(zest::tchebyshev(2, 1.5), zest::validation_error);
  CHECK_THROWS_AS(zest::tchebyshev(-1, 0.0), zest::validation_error);
}

TEST_CASE("tchebyshev generating function reproduces the logarithm") {
  // -ln(1 - 2wt + t^2) = sum_{l>=1} (2 t^l / l) T_l(w); at t = 0.3 the terms
  // beyond l = 60 are below 1e-33, so the partial sum is the exact value.
  const double t = 0.3, w = 0.5;
  double sum = 0.0;
  double tl = 1.0;
  for (int l = 1; l <= 60; ++l) {
    tl *= t;
    sum += 2.0 * tl / l * zest::tchebyshev(l, w);
  }
  CHECK(sum == Catch::Approx(-std::log(1.0 - 2.0 * w * t + t * t)).epsilon(1e-10));
}

TEST_CASE("gegenbauer recurrence agrees with its generating function") {
  CHECK(zest::gegenbauer(0.7, 0, 0.3) == 1.0);
  CHECK(zest::gegenbauer(0.5, 1, -0.62) == Catch::Approx(-0.62).margin(1e-15));

  // (1 - 2wt + t^2)^(-alpha) = sum_n t^n C_n^alpha(w); the partial sums below
  // run far past convergence for |t| <= 0.5.
  const auto gen_sum = [](double alpha, double w, double t) {
    double sum = 0.0, tn = 1.0;
    for (int n = 0; n <= 120; ++n) {
      sum += tn * zest::gegenbauer(alpha, n, w);
      tn *= t;
    }
    return sum;
  };
  CHECK(gen_sum(1.0, -0.4, 0.2) ==
        Catch::Approx(1.0 / (1.0 - 2.0 * (-0.4) * 0.2 + 0.04)).epsilon(1e-10));
  for (double alpha : {0.5, 1.5, 2.0}) {
    for (double w : {-0.9, -0.3, 0.2, 0.8}) {
      for (double t : {-0.5, -0.2, 0.3, 0.5}) {
        const double exact = std::pow(1.0 - 2.0 * w * t + t * t, -alpha);
        CHECK(gen_sum(alpha, w, t) == Catch::Approx(exact).epsilon(1e-9));
      }
    }
  }
  CHECK_THROWS_AS(zest::gegenbauer(0.0, 2, 0.1), zest::validation_error);
}

TEST_CASE("projection kernel normalizations") {
  // Constant projector on the 2-sphere.
  CHECK(zest::projection_kernel(3, 0, 0.77) == Catch::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
  // Circle case: 1/(2 pi) for order 0, cos(l phi)/pi above.
  CHECK(zest::projection_kernel(2, 0, 0.3) == Catch::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
  for (double phi : {0.4, 1.3, 2.6}) {
    CHECK(zest::projection_kernel(2, 2, std::cos(phi)) ==
          Catch::Approx(std::cos(2.0 * phi) / kPi).margin(1e-13));
  }
  // At coincident directions the kernel value is the harmonic-space dimension
  // divided by the sphere area (the trace of the projector spread evenly).
  for (int d : {2, 3, 4, 5}) {
    for (int l : {0, 1, 2, 5, 10}) {
      CHECK(zest::projection_kernel(d, l, 1.0) ==
            Catch::Approx(zest::harmonic_dimension(d, l) / zest::sphere_area(d))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("projection kernels reproduce harmonics and are idempotent under sphere quadrature") {
  // For Y(y) = P_l(y.z), integrating Q_l(x.y) Y(y) over the sphere must give
  // back P_l(x.z); replacing Y by Q_l(y.z) tests idempotence of the projector.
  const double ca = std::cos(1.1), sa = std::sin(1.1);
  for (int l = 0; l <= 5; ++l) {
    for (double alpha : {0.3, 1.1, 2.2}) {
      const double cx = std::cos(alpha), sx = std::sin(alpha);
      const auto reproduced = sphere_integral_3d([&](double y1, double y2, double y3) {
        const double xy = sx * y1 + cx * y3;
        return zest::projection_kernel(3, l, xy) * std::legendre(l, y3);
      });
      CHECK(reproduced == Catch::Approx(std::legendre(l, cx)).margin(1e-6));

      const auto twice = sphere_integral_3d([&](double y1, double y2, double y3) {
        const double xy = sx * y1 + cx * y3;
        const double yz = sa * y1 + ca * y3;
        return zest::projection_kernel(3, l, xy) * zest::projection_kernel(3, l, yz);
      });
      const double xz = sx * sa + cx * ca;  // x and z in the same meridian plane
      CHECK(twice == Catch::Approx(zest::projection_kernel(3, l, xz)).margin(1e-6));
    }
  }
}

TEST_CASE("spectral eigenvalue map") {
  CHECK(zest::lambda_eigenvalue(3, 2) == 2.5);
  CHECK(zest::lambda_eigenvalue(2, 0) == 0.0);
  // (l + d/2 - 1)^2 - (d/2 - 1)^2 = l (l + d - 2), the Laplacian eigenvalue.
  for (int d : {2, 3, 4, 6}) {
    for (int l : {0, 1, 3, 9}) {
      const double lam = zest::lambda_eigenvalue(d, l);
      const double nu = 0.5 * d - 1.0;
      CHECK(lam * lam - nu * nu == Catch::Approx(double(l) * (l + d - 2)).margin(1e-12));
    }
  }
  CHECK_THROWS_AS(zest::lambda_eigenvalue(1, 0), zest::validation_error);
}

TEST_CASE("closed-form rotation kernel: conjugation, growth at the locus, lattice errors") {
  for (double w : {-0.8, 0.1, 0.6}) {
    const cplx a = zest::wave_kernel_closed(3, 1.1, w, 1e-3);
    const cplx b = zest::wave_kernel_closed(3, -1.1, w, 1e-3);
    CHECK(std::abs(b - std::conj(a)) < 1e-14 * std::abs(a));
  }
  // The modulus at w = cos(theta) grows as the regularization shrinks.
  const double at_locus_coarse = std::abs(zest::wave_kernel_closed(3, kPi / 2, 0.0, 1e-1));
  const double at_locus_mid = std::abs(zest::wave_kernel_closed(3, kPi / 2, 0.0, 1e-2));
  const double at_locus_fine = std::abs(zest::wave_kernel_closed(3, kPi / 2, 0.0, 1e-3));
  CHECK(at_locus_mid > 10.0 * at_locus_coarse);
  CHECK(at_locus_fine > 10.0 * at_locus_mid);
  CHECK_THROWS_AS(zest::wave_kernel_closed(3, kPi, 0.3, 1e-3), zest::validation_error);
  CHECK_THROWS_AS(zest::wave_kernel_closed(3, 2.0 * kPi, 0.3, 1e-3), zest::validation_error);
  CHECK_THROWS_AS(zest::wave_kernel_closed(3, 0.5, 0.3, 0.0), zest::validation_error);
}

TEST_CASE("grid synthesis matches the exact closed form of the damped series") {
  // With Abel damping t and truncation at l = 300 the dropped tail is below
  // 1e-9 for t = 0.9, so the complex-angle closed form is an exact reference
  // for the synthesized grid in every dimension tested.
  const double t = 0.9;

  // Anchor the closed form itself against literal summation first.
  for (int d : {2, 3, 4}) {
    for (double theta : {0.9, -1.3, 2.0 * kPi, -2.0 * kPi}) {
      for (double w : {-0.7, 0.2, 0.9}) {
        const cplx direct = damped_series_direct(d, theta, t, w, 300);
        const cplx exact = damped_series_exact(d, theta, t, w);
        INFO("d=" << d << " theta=" << theta << " w=" << w);
        CHECK(std::abs(direct - exact) < 1e-9 * (1.0 + std::abs(exact)));
      }
    }
  }

  for (int d : {2, 3, 4}) {
    for (double theta : {0.9, 2.5, -1.3, 2.0 * kPi}) {
      zest::GridSpec spec;
      spec.n_nodes = 501;
      spec.l_max = 300;
      spec.smoothing = zest::Smoothing::Abel;
      spec.smoothing_param = t;
      const auto grid = zest::wave_kernel_series(d, theta, spec);
      REQUIRE(grid.w.size() == 501);
      REQUIRE(grid.values.size() == 501);
      double worst = 0.0;
      for (std::size_t j = 0; j < grid.w.size(); ++j) {
        const cplx exact = damped_series_exact(d, theta, t, grid.w[j]);
        worst = std::max(worst,
                         std::abs(grid.values[j] - exact) / (1.0 + std::abs(exact)));
      }
      INFO("d=" << d << " theta=" << theta);
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("closed form with small regularization matches the lightly damped series") {
  // Damping t = e^(-eps) shifts the angle by i*eps; at theta = pi/2 that
  // reproduces the eps-regularized closed form up to O(eps) prefactor drift.
  const double eps = 1e-3;
  const double t = std::exp(-eps);
  const cplx series = damped_series_exact(3, kPi / 2, t, 0.9);
  const cplx closed = zest::wave_kernel_closed(3, kPi / 2, 0.9, eps);
  CHECK(std::abs(series - closed) < 1e-3 * std::abs(closed));
}

TEST_CASE("kernel mass concentrates at the poles for full and half turns") {
  zest::GridSpec spec;
  spec.n_nodes = 801;
  spec.l_max = 200;
  spec.smoothing = zest::Smoothing::Abel;  // default damping 1 - 1/l_max

  // theta = 2 pi: the map is the identity times (-1)^d — mass piles up at
  // w = 1 with sign +1 for even d and -1 for odd d.
  {
    const auto even = zest::wave_kernel_series(4, 2.0 * kPi, spec);
    const auto peak = zest::singularity_locator(even);
    CHECK(peak.found);
    CHECK(peak.w_peak > 0.999);
    const cplx at_pole = even.values.back();
    CHECK(std::arg(at_pole) == Catch::Approx(0.0).margin(0.02));

    // Mass metric: |K| integrated with the zonal weight (1 - w^2)^((d-3)/2)
    // by the trapezoid rule on the grid, near the pole vs everywhere.  The
    // damping must die out well before the truncation order, or ringing from
    // the truncated tail pollutes the bulk; t = 0.98 at l_max = 400 leaves
    // the dropped coefficients at the 3e-4 level.
    zest::GridSpec mass_spec = spec;
    mass_spec.l_max = 400;
    mass_spec.smoothing_param = 0.98;
    const auto heavy = zest::wave_kernel_series(4, 2.0 * kPi, mass_spec);
    double near = 0.0, total = 0.0;
    for (std::size_t j = 1; j < heavy.w.size(); ++j) {
      const double wm = 0.5 * (heavy.w[j - 1] + heavy.w[j]);
      const double dm = heavy.w[j] - heavy.w[j - 1];
      const double zonal = std::sqrt(std::max(0.0, 1.0 - wm * wm));
      const double piece =
          0.5 * (std::abs(heavy.values[j - 1]) + std::abs(heavy.values[j])) * zonal * dm;
      total += piece;
      if (wm > 0.9) near += piece;
    }
    CHECK(near / total > 0.85);
  }
  {
    const auto odd = zest::wave_kernel_series(3, 2.0 * kPi, spec);
    CHECK(std::arg(odd.values.back()) == Catch::Approx(kPi).margin(0.02));
  }

  // theta = pi, d = 3: the antipodal map times e^{i pi/2}; mass at w = -1
  // with phase +i.
  {
    const auto anti = zest::wave_kernel_series(3, kPi, spec);
    const auto peak = zest::singularity_locator(anti);
    CHECK(peak.found);
    CHECK(peak.w_peak < -0.999);
    CHECK(std::arg(anti.values.front()) == Catch::Approx(kPi / 2).margin(0.02));
  }
}

TEST_CASE("full-turn shift multiplies the series by one unimodular constant") {
  const double theta = 1.234;
  for (int d : {2, 3, 5}) {
    zest::GridSpec spec;
    spec.n_nodes = 201;
    spec.l_max = 120;
    spec.smoothing = zest::Smoothing::Abel;
    spec.smoothing_param = 0.92;
    const cplx factor = std::polar(1.0, 2.0 * kPi * (0.5 * d - 1.0));
    // Coefficientwise the shift is exactly one unimodular constant.
    for (int l = 0; l <= spec.l_max; ++l) {
      const double lam = zest::lambda_eigenvalue(d, l);
      CHECK(std::abs(std::polar(1.0, (theta + 2.0 * kPi) * lam) -
                     factor * std::polar(1.0, theta * lam)) <= 1e-12);
    }
    // The synthesized grids inherit it up to argument-reduction rounding,
    // which grows like l * 2 pi * machine epsilon per coefficient.
    const auto a = zest::wave_kernel_series(d, theta, spec);
    const auto b = zest::wave_kernel_series(d, theta + 2.0 * kPi, spec);
    for (std::size_t j = 0; j < a.values.size(); ++j) {
      CHECK(std::abs(b.values[j] - factor * a.values[j]) <=
            1e-11 * (1.0 + std::abs(a.values[j])));
    }
  }
}

TEST_CASE("damped unimodular coefficients satisfy the Parseval mass identity") {
  // For K = sum c_l f_l Q_l with |c_l| = 1, the squared L2 mass over the
  // sphere equals sum f_l^2 dim_l / area; the degree-120 integrand is exact
  // under the 64-node Gauss rule.
  const int L = 60;
  std::vector<cplx> coeffs(L + 1);
  for (int l = 0; l <= L; ++l) coeffs[l] = std::polar(1.0, 0.37 * l * l);

  const auto check_mass = [&](zest::Smoothing s, double param) {
    const auto& [u, wt] = gl64();
    double lhs = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      cplx k = 0.0;
      for (int l = 0; l <= L; ++l)
        k += coeffs[l] * zest::smoothing_factor(s, param, l) *
             zest::projection_kernel(3, l, u[i]);
      lhs += wt[i] * std::norm(k);
    }
    lhs *= 2.0 * kPi;
    double rhs = 0.0;
    for (int l = 0; l <= L; ++l) {
      const double f = zest::smoothing_factor(s, param, l);
      rhs += f * f * zest::harmonic_dimension(3, l) / zest::sphere_area(3);
    }
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
  };
  check_mass(zest::Smoothing::None, 0.0);
  check_mass(zest::Smoothing::Abel, 0.9);
  check_mass(zest::Smoothing::Gauss, 20.0);
}

TEST_CASE("projection quadrature recovers unimodular coefficients") {
  // Synthesize with phases only, then project each order back out:
  // c_l = (area / dim_l) * circumference * int K(w) Q_l(w) dw on the 2-sphere.
  const int L = 40;
  std::vector<cplx> coeffs(L + 1);
  for (int l = 0; l <= L; ++l) coeffs[l] = std::polar(1.0, 1.7 + 0.3 * l - 0.05 * l * l);
  const auto& [u, wt] = gl64();
  std::vector<cplx> at_nodes(u.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (int l = 0; l <= L; ++l)
      at_nodes[i] += coeffs[l] * zest::projection_kernel(3, l, u[i]);
  for (int l = 0; l <= L; ++l) {
    cplx integral = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      integral += wt[i] * at_nodes[i] * zest::projection_kernel(3, l, u[i]);
    const cplx recovered = integral * 2.0 * kPi * zest::sphere_area(3) /
                           zest::harmonic_dimension(3, l);
    CHECK(std::abs(std::abs(recovered) - 1.0) < 1e-8);
    CHECK(std::abs(recovered - coeffs[l]) < 1e-8);
  }
}

TEST_CASE("real coefficient sequences synthesize real kernels") {
  std::vector<cplx> coeffs(81);
  for (std::size_t l = 0; l < coeffs.size(); ++l) coeffs[l] = (l % 3 == 0) ? 1.0 : -1.0;
  zest::GridSpec spec;
  spec.n_nodes = 301;
  spec.l_max = 80;
  spec.smoothing = zest::Smoothing::Gauss;
  spec.smoothing_param = 25.0;
  const auto g = zest::synthesize_kernel(3, coeffs, spec);
  for (std::size_t j = 0; j < g.values.size(); ++j) {
    CHECK(std::fabs(g.values[j].imag()) <= 1e-13 * (1.0 + std::fabs(g.values[j].real())));
  }
}

TEST_CASE("scattering kernel from phase shifts peaks on the expected cone") {
  zest::GridSpec spec;  // 2001 Chebyshev nodes, l_max 200, defaults
  spec.smoothing = zest::Smoothing::Abel;

  const auto m = pure_model(0.5, 1.0);

  // All phase shifts zero: the identity map, delta concentration at w = 1.
  {
    std::vector<double> zeros(spec.l_max + 1, 0.0);
    const auto g = zest::s0_kernel(m, 3, zeros, spec);
    const auto peak = zest::singularity_locator(g);
    CHECK(peak.found);
    CHECK(peak.w_peak > 0.9995);
  }

  // Phase shifts following the exact rotation law sigma_l = (c0 - theta L)/2
  // put the peak at cos(theta): theta = pi/2 for mu = 2/3 (w = 0), 3 pi/2 for
  // mu = 1.2 (w = 0 again), pi for mu = 1 (w = -1).
  const auto cone_peak = [&spec](double mu, double c0) {
    const auto model = pure_model(1.0, mu);
    const double theta = zest::rotation_angle(mu);
    std::vector<double> sig(spec.l_max + 1);
    for (int l = 0; l <= spec.l_max; ++l)
      sig[l] = 0.5 * (c0 - theta * zest::lambda_eigenvalue(3, l));
    const auto g = zest::s0_kernel(model, 3, sig, spec);
    return zest::singularity_locator(g);
  };
  {
    const auto p = cone_peak(2.0 / 3.0, 1.3);
    CHECK(p.found);
    CHECK(std::fabs(p.w_peak - std::cos(zest::rotation_angle(2.0 / 3.0))) < 2e-3);
    CHECK(std::fabs(p.w_peak) < 2e-3);
  }
  {
    const auto p = cone_peak(1.2, 0.4);
    CHECK(p.found);
    CHECK(std::fabs(p.w_peak) < 2e-3);
  }

  // Semiclassical phase shifts for mu = 1 concentrate on the backscattering
  // cone w = -1.  The s-wave has no centrifugal barrier, so its shift comes
  // from the differential-equation solver; the semiclassical form covers the
  // rest.
  {
    std::vector<double> sig(spec.l_max + 1);
    sig[0] = zest::phase_shift(zest::turning_point(m, 0), 1e-8).sigma;
    for (int l = 1; l <= spec.l_max; ++l)
      sig[l] = zest::wkb_phase_shift(zest::turning_point(m, l)).sigma;
    const auto g = zest::s0_kernel(m, 3, sig, spec);
    const auto peak = zest::singularity_locator(g);
    CHECK(peak.found);
    CHECK(peak.w_peak < -0.999);

    // The locator depends only on |values|: a global unimodular factor on the
    // coefficients (a constant shift of all phases) must not move the peak.
    std::vector<double> shifted = sig;
    for (auto& s : shifted) s += 0.4;
    const auto peak2 = zest::singularity_locator(zest::s0_kernel(m, 3, shifted, spec));
    CHECK(peak2.found);
    CHECK(peak2.w_peak == Catch::Approx(peak.w_peak).margin(1e-12));
  }

  // A flat kernel (only the constant order) yields a no-peak verdict.
  {
    std::vector<cplx> flat(spec.l_max + 1, 0.0);
    flat[0] = 1.0;
    const auto g = zest::synthesize_kernel(3, flat, spec);
    const auto peak = zest::singularity_locator(g);
    CHECK_FALSE(peak.found);
    CHECK(peak.sharpness < 2.0);
  }

  // Missing coefficients are rejected up front.
  std::vector<double> short_list(10, 0.0);
  CHECK_THROWS_AS(zest::s0_kernel(m, 3, short_list, spec), zest::validation_error);
}

TEST_CASE("global phase constant and rotation-limit residuals") {
  // Plug-in value: mu = 1, gamma = 1/2, R0 = 1, pure tail: 4 sqrt(1) / 1 = 4.
  CHECK(zest::global_phase_constant(pure_model(0.5, 1.0)) ==
        Catch::Approx(4.0).margin(1e-12));

  // The constant ties to the large-l intercept of the phase shifts:
  // c0 = 2 c_half + theta_mu (d/2 - 1) with
  // c_half = -pi mu (d-2)/(4(2-mu)) + 2 sqrt(2 gamma) R0^(1-mu/2)/(2-mu) + defect.
  for (double mu : {0.6, 1.0, 1.37}) {
    for (int d : {2, 3, 4}) {
      for (double gamma : {0.5, 2.0}) {
        zest::PotentialModel m = pure_model(gamma, mu);
        m.dim = d;
        m.R0 = 2.0;
        m.v2_beta = 0.3;
        m.v2_eps2 = 1.2;
        const double defect = zest::detail::v1_tail_defect(m);
        const double c_half = -kPi * mu * (d - 2) / (4.0 * (2.0 - mu)) +
                              2.0 * std::sqrt(2.0 * gamma) *
                                  std::pow(m.R0, 1.0 - 0.5 * mu) / (2.0 - mu) +
                              defect;
        const double c0 = 2.0 * c_half + zest::rotation_angle(mu) * (0.5 * d - 1.0);
        CHECK(zest::global_phase_constant(m) == Catch::Approx(c0).margin(1e-12));
      }
    }
  }

  // Phase shifts exactly on the rotation law give vanishing residuals; a
  // perturbation delta shows up as 2 sin(delta) in modulus.
  {
    const auto m = pure_model(0.8, 1.1);
    const double c0 = zest::global_phase_constant(m);
    const double theta = zest::rotation_angle(m.mu);
    std::vector<double> sig(5);
    for (int i = 0; i < 5; ++i)
      sig[i] = 0.5 * (c0 - theta * zest::lambda_eigenvalue(m.dim, 7 + i));
    auto res = zest::compact_remainder_residuals(m, sig, 7);
    for (const auto& r : res) CHECK(std::abs(r) < 1e-12);
    sig[2] += 0.05;
    res = zest::compact_remainder_residuals(m, sig, 7);
    CHECK(std::abs(res[2]) == Catch::Approx(2.0 * std::sin(0.05)).epsilon(1e-10));
  }

  // With a subleading tail the computed phase shifts drift off the rotation
  // law by a remainder that shrinks with l.
  {
    zest::PotentialModel m;
    m.gamma = 0.5;
    m.mu = 1.0;
    m.v2_beta = 0.5;
    m.v2_eps2 = 1.5;
    const auto residual_at = [&m](int l) {
      const double sig = zest::phase_shift(zest::turning_point(m, l), 1e-9).sigma;
      return std::abs(zest::compact_remainder_residuals(m, {sig}, l)[0]);
    };
    const double r15 = residual_at(15);
    const double r25 = residual_at(25);
    const double r40 = residual_at(40);
    CHECK(r25 < r15);
    CHECK(r40 < r25);
    CHECK(r40 < 0.05);
  }
}
