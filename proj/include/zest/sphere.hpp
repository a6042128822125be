#pragma once

// Zonal kernels on the unit sphere S^(d-1): Tchebyshev and Gegenbauer
// polynomials, the order-l harmonic projection kernels Q_l(w) in the cosine
// variable w = omega . omega', synthesis of kernels from per-order
// coefficients (with optional Abel or Gauss damping of the high orders), the
// closed form of the spectral rotation kernel, a peak locator for smoothed
// kernels, and the residuals of the scattering kernel against its
// rank-one-rotation limit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "zest/errors.hpp"
#include "zest/numeric.hpp"
#include "zest/parallel.hpp"
#include "zest/potential.hpp"
#include "zest/radial.hpp"

namespace zest {

namespace detail {

inline void check_poly_args(int n, double w, const char* who) {
  if (n < 0) throw validation_error(std::string(who) + ": polynomial order must be >= 0");
  if (!(std::fabs(w) <= 1.0))
    throw validation_error(std::string(who) + ": argument must lie in [-1, 1]");
}

}  // namespace detail

// Tchebyshev polynomial T_n(w) = cos(n arccos w) by the three-term
// recurrence T_n = 2 w T_{n-1} - T_{n-2}.
inline double tchebyshev(int n, double w) {
  detail::check_poly_args(n, w, "tchebyshev");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = w;
  for (int k = 2; k <= n; ++k) {
    const double next = 2.0 * w * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Gegenbauer polynomial C_n^alpha(w), alpha > 0, by the recurrence
// n C_n = 2 w (n + alpha - 1) C_{n-1} - (n + 2 alpha - 2) C_{n-2},
// seeded with C_0 = 1, C_1 = 2 alpha w.
inline double gegenbauer(double alpha, int n, double w) {
  if (!(alpha > 0.0)) throw validation_error("gegenbauer: index alpha must be positive");
  detail::check_poly_args(n, w, "gegenbauer");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * alpha * w;
  for (int k = 2; k <= n; ++k) {
    const double next =
        (2.0 * w * (k + alpha - 1.0) * cur - (k + 2.0 * alpha - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Eigenvalue of the first-order spherical operator Lambda on order-l
// harmonics: l + d/2 - 1.
inline double lambda_eigenvalue(int d, int l) {
  if (d < 2) throw validation_error("lambda_eigenvalue: dimension must be >= 2");
  if (l < 0) throw validation_error("lambda_eigenvalue: order must be >= 0");
  return l + 0.5 * d - 1.0;
}

// Surface area of the unit sphere S^(d-1).
inline double sphere_area(int d) {
  if (d < 1) throw validation_error("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(detail::kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

// Dimension of the space of order-l spherical harmonics on S^(d-1).
inline double harmonic_dimension(int d, int l) {
  if (d < 2) throw validation_error("harmonic_dimension: dimension must be >= 2");
  if (l < 0) throw validation_error("harmonic_dimension: order must be >= 0");
  if (d == 2) return l == 0 ? 1.0 : 2.0;
  // (2l + d - 2)/(d - 2) * binomial(l + d - 3, d - 3)
  double binom = 1.0;
  for (int j = 1; j <= d - 3; ++j) binom *= static_cast<double>(l + j) / j;
  return binom * (2.0 * l + d - 2.0) / (d - 2.0);
}

// Kernel Q_l(w) of the orthogonal projection onto order-l spherical
// harmonics, as a function of w = omega . omega'.  On the circle the
// normalization is 1/(2 pi) for l = 0 and T_l/pi for l >= 1; for d >= 3 it is
// (d - 2 + 2l) Gamma(d/2 - 1) / (4 pi^(d/2)) * C_l^((d-2)/2)(w).
inline double projection_kernel(int d, int l, double w) {
  if (d < 2) throw validation_error("projection_kernel: dimension must be >= 2");
  detail::check_poly_args(l, w, "projection_kernel");
  if (d == 2) {
    if (l == 0) return 1.0 / (2.0 * detail::kPi);
    return tchebyshev(l, w) / detail::kPi;
  }
  const double pref = std::tgamma(0.5 * d - 1.0) / (4.0 * std::pow(detail::kPi, 0.5 * d));
  return pref * (d - 2.0 + 2.0 * l) * gegenbauer(0.5 * (d - 2.0), l, w);
}

// ---------------------------------------------------------------------------
// Kernel grids

// High-order damping applied to a coefficient sequence before synthesis.
enum class Smoothing { None, Abel, Gauss };

inline const char* to_string(Smoothing s) {
  switch (s) {
    case Smoothing::None: return "none";
    case Smoothing::Abel: return "abel";
    case Smoothing::Gauss: return "gauss";
  }
  return "none";
}

// Per-order damping factor: Abel multiplies order l by t^l (t < 1); Gauss by
// exp(-(l/width)^2).
inline double smoothing_factor(Smoothing s, double param, int l) {
  switch (s) {
    case Smoothing::None: return 1.0;
    case Smoothing::Abel: return std::pow(param, l);
    case Smoothing::Gauss: {
      const double x = l / param;
      return std::exp(-x * x);
    }
  }
  return 1.0;
}

// Request for a synthesized kernel grid.
struct GridSpec {
  int n_nodes = 2001;     // Chebyshev-spaced nodes on [-1, 1]
  int l_max = 200;        // truncation order of the synthesis
  Smoothing smoothing = Smoothing::None;
  double smoothing_param = 0.0;  // Abel: damping t in (0,1), 0 selects 1 - 1/l_max;
                                 // Gauss: width > 0 (required)
  int threads = 0;               // 0: all available execution units
};

// A zonal kernel sampled on a grid in w = omega . omega'.
struct KernelGrid {
  int dim = 3;
  int l_max = 0;
  Smoothing smoothing = Smoothing::None;
  double smoothing_param = 0.0;
  std::vector<double> w;                       // increasing, in [-1, 1]
  std::vector<std::complex<double>> values;    // kernel value per node
};

namespace detail {

inline double resolve_smoothing_param(const GridSpec& spec) {
  switch (spec.smoothing) {
    case Smoothing::None:
      return 0.0;
    case Smoothing::Abel: {
      const double t =
          spec.smoothing_param > 0.0 ? spec.smoothing_param : 1.0 - 1.0 / std::max(spec.l_max, 2);
      if (!(t > 0.0 && t < 1.0))
        throw validation_error("kernel grid: Abel damping factor must lie in (0, 1)");
      return t;
    }
    case Smoothing::Gauss:
      if (!(spec.smoothing_param > 0.0))
        throw validation_error("kernel grid: Gauss damping width must be positive");
      return spec.smoothing_param;
  }
  return 0.0;
}

// Chebyshev-spaced nodes -cos(pi j / (n-1)), increasing from -1 to 1; they
// cluster at the endpoints, where smoothed kernels concentrate.
inline std::vector<double> chebyshev_nodes(int n) {
  if (n < 3) throw validation_error("kernel grid: need at least 3 nodes");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = -std::cos(kPi * j / (n - 1.0));
  w.front() = -1.0;
  w.back() = 1.0;
  return w;
}

}  // namespace detail

// Synthesizes K(w) = sum_{l=0}^{l_max} coeffs[l] * f_l * Q_l(w) on a
// Chebyshev-spaced grid, where f_l is the requested damping factor.  Nodes
// are evaluated independently (deterministic for any thread count).
inline KernelGrid synthesize_kernel(int d, const std::vector<std::complex<double>>& coeffs,
                                    const GridSpec& spec) {
  if (d < 2) throw validation_error("synthesize_kernel: dimension must be >= 2");
  if (spec.l_max < 0) throw validation_error("synthesize_kernel: l_max must be >= 0");
  if (coeffs.size() < static_cast<std::size_t>(spec.l_max) + 1)
    throw validation_error("synthesize_kernel: coefficient list covers orders up to " +
                           std::to_string(static_cast<long>(coeffs.size()) - 1) +
                           " but l_max is " + std::to_string(spec.l_max));

  KernelGrid g;
  g.dim = d;
  g.l_max = spec.l_max;
  g.smoothing = spec.smoothing;
  g.smoothing_param = detail::resolve_smoothing_param(spec);
  g.w = detail::chebyshev_nodes(spec.n_nodes);

  // Fold damping and the per-order projection normalization into one weight.
  const int L = spec.l_max;
  std::vector<std::complex<double>> weight(static_cast<std::size_t>(L) + 1);
  if (d == 2) {
    for (int l = 0; l <= L; ++l)
      weight[static_cast<std::size_t>(l)] =
          coeffs[static_cast<std::size_t>(l)] *
          (smoothing_factor(g.smoothing, g.smoothing_param, l) *
           (l == 0 ? 1.0 / (2.0 * detail::kPi) : 1.0 / detail::kPi));
  } else {
    const double pref =
        std::tgamma(0.5 * d - 1.0) / (4.0 * std::pow(detail::kPi, 0.5 * d));
    for (int l = 0; l <= L; ++l)
      weight[static_cast<std::size_t>(l)] =
          coeffs[static_cast<std::size_t>(l)] *
          (smoothing_factor(g.smoothing, g.smoothing_param, l) * pref * (d - 2.0 + 2.0 * l));
  }

  const double alpha = 0.5 * (d - 2.0);
  const auto node_value = [&](std::size_t j) {
    const double w = g.w[j];
    std::complex<double> acc = weight[0];
    if (L == 0) return acc;
    if (d == 2) {
      double prev = 1.0, cur = w;  // T_0, T_1
      acc += weight[1] * cur;
      for (int l = 2; l <= L; ++l) {
        const double next = 2.0 * w * cur - prev;
        prev = cur;
        cur = next;
        acc += weight[static_cast<std::size_t>(l)] * cur;
      }
    } else {
      double prev = 1.0, cur = 2.0 * alpha * w;  // C_0, C_1
      acc += weight[1] * cur;
      for (int l = 2; l <= L; ++l) {
        const double next =
            (2.0 * w * (l + alpha - 1.0) * cur - (l + 2.0 * alpha - 2.0) * prev) / l;
        prev = cur;
        cur = next;
        acc += weight[static_cast<std::size_t>(l)] * cur;
      }
    }
    return acc;
  };
  g.values = parallel_map<std::complex<double>>(g.w.size(), node_value, spec.threads);
  return g;
}

// Closed form of the spectral rotation kernel sum_l e^{i theta Lambda} Q_l at
// angles theta off the lattice pi Z:
//   (2 pi)^(-d/2) sin(theta) Gamma(d/2) e^{-i pi/2} (cos(theta) - w -+ i eps)^(-d/2),
// principal branch, with the regularization sign -sign(sin theta) (the branch
// alternates with the parity of floor(theta/pi)).
inline std::complex<double> wave_kernel_closed(int d, double theta, double w, double eps) {
  if (d < 2) throw validation_error("wave_kernel_closed: dimension must be >= 2");
  if (!(eps > 0.0)) throw validation_error("wave_kernel_closed: regularization eps must be positive");
  const double s = std::sin(theta);
  if (std::fabs(s) < 1e-12)
    throw validation_error(
        "wave_kernel_closed: theta is a multiple of pi, where the kernel degenerates to the "
        "identity (even multiples, global factor (-1)^{k d}) or the antipodal map (odd "
        "multiples, factor e^{i pi (2k+1)(d/2-1)}); evaluate the smoothed series instead");
  const double sign = s > 0.0 ? 1.0 : -1.0;
  const std::complex<double> base(std::cos(theta) - w, -sign * eps);
  const double pref = std::pow(2.0 * detail::kPi, -0.5 * d) * std::tgamma(0.5 * d) * s;
  return pref * std::complex<double>(0.0, -1.0) *
         std::pow(base, std::complex<double>(-0.5 * d, 0.0));
}

// Truncated, optionally damped series of the same kernel:
// sum_l f_l e^{i theta (l + d/2 - 1)} Q_l(w) sampled on a grid.
inline KernelGrid wave_kernel_series(int d, double theta, const GridSpec& spec) {
  if (d < 2) throw validation_error("wave_kernel_series: dimension must be >= 2");
  std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(std::max(spec.l_max, 0)) + 1);
  for (int l = 0; l < static_cast<int>(coeffs.size()); ++l)
    coeffs[static_cast<std::size_t>(l)] = std::polar(1.0, theta * (l + 0.5 * d - 1.0));
  return synthesize_kernel(d, coeffs, spec);
}

// Zero-energy scattering kernel synthesized from per-order phase shifts:
// sum_l f_l e^{2 i sigma_l} Q_l(w).  sigmas[l] is the phase shift of partial
// wave l; the list must cover l = 0..l_max.
inline KernelGrid s0_kernel(const PotentialModel& m, int d, const std::vector<double>& sigmas,
                            const GridSpec& spec) {
  if (!(m.mu > 0.0 && m.mu < 2.0))
    throw validation_error("s0_kernel: the tail exponent mu must lie in (0, 2)");
  if (sigmas.size() < static_cast<std::size_t>(std::max(spec.l_max, 0)) + 1)
    throw validation_error("s0_kernel: phase-shift list covers orders up to " +
                           std::to_string(static_cast<long>(sigmas.size()) - 1) +
                           " but l_max is " + std::to_string(spec.l_max));
  std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(std::max(spec.l_max, 0)) + 1);
  for (std::size_t l = 0; l < coeffs.size(); ++l)
    coeffs[l] = std::polar(1.0, 2.0 * sigmas[l]);
  return synthesize_kernel(d, coeffs, spec);
}

// ---------------------------------------------------------------------------
// Peak location and limit residuals

// Verdict of the kernel peak search.
struct PeakLocation {
  bool found = false;      // false when the kernel is too flat to call a peak
  double w_peak = 0.0;     // refined abscissa of the largest |value|
  double height = 0.0;     // |value| at the grid maximum
  double sharpness = 0.0;  // peak |value| / median |value|
};

// Locates the modulus peak of a sampled kernel: grid argmax, quadratic
// sub-grid refinement through the neighboring nodes, and a peak-to-median
// sharpness ratio.  A ratio below 2 yields a no-peak verdict (found = false)
// with the raw argmax still reported.
inline PeakLocation singularity_locator(const KernelGrid& g) {
  const std::size_t n = g.w.size();
  if (n < 3 || g.values.size() != n)
    throw validation_error("singularity_locator: grid needs at least 3 matching nodes");

  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(g.values[i]);
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());

  std::vector<double> scratch(mag);
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(n / 2),
                   scratch.end());
  const double median = scratch[n / 2];

  PeakLocation out;
  out.height = mag[peak];
  out.w_peak = g.w[peak];
  out.sharpness = out.height / std::max(median, 1e-300);
  out.found = out.sharpness >= 2.0;
  if (!out.found) return out;

  if (peak > 0 && peak + 1 < n) {
    // Vertex of the parabola through the three nodes around the maximum
    // (the grid spacing is non-uniform, so use the general three-point form).
    const double x1 = g.w[peak - 1], x2 = g.w[peak], x3 = g.w[peak + 1];
    const double y1 = mag[peak - 1], y2 = mag[peak], y3 = mag[peak + 1];
    const double den = x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2);
    if (std::fabs(den) > 1e-14 * (std::fabs(y1) + std::fabs(y2) + std::fabs(y3))) {
      const double num =
          x1 * x1 * (y2 - y3) + x2 * x2 * (y3 - y1) + x3 * x3 * (y1 - y2);
      const double vertex = 0.5 * num / den;
      if (vertex >= x1 && vertex <= x3) out.w_peak = vertex;
    }
  }
  return out;
}

// Spectral rotation angle mu pi / (2 - mu) of the zero-energy scattering map
// for an attractive power-law tail of exponent mu.
inline double rotation_angle(double mu) {
  if (!(mu > 0.0 && mu < 2.0))
    throw validation_error("rotation_angle: the tail exponent mu must lie in (0, 2)");
  return mu * detail::kPi / (2.0 - mu);
}

// Global phase constant of the zero-energy scattering map's rank-preserving
// limit: 4 sqrt(2 gamma)/(2 - mu) R0^(1 - mu/2) plus twice the tail defect
// integral of the full potential against its radial part.
inline double global_phase_constant(const PotentialModel& m) {
  if (!(m.mu > 0.0 && m.mu < 2.0))
    throw validation_error("global_phase_constant: the tail exponent mu must lie in (0, 2)");
  return 4.0 * std::sqrt(2.0 * m.gamma) / (2.0 - m.mu) * std::pow(m.R0, 1.0 - 0.5 * m.mu) +
         2.0 * detail::v1_tail_defect(m);
}

// Residuals e^{2 i sigma_l} - e^{i (c0 - theta_mu (l + d/2 - 1))} of the
// scattering map against its rotation limit; sigmas[i] is the phase shift of
// partial wave l_lo + i.  The remainder being compact means these tend to 0.
inline std::vector<std::complex<double>> compact_remainder_residuals(
    const PotentialModel& m, const std::vector<double>& sigmas, int l_lo) {
  if (l_lo < 0) throw validation_error("compact_remainder_residuals: l_lo must be >= 0");
  const double c0 = global_phase_constant(m);
  const double theta = rotation_angle(m.mu);
  std::vector<std::complex<double>> out(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double lam = lambda_eigenvalue(m.dim, l_lo + static_cast<int>(i));
    out[i] = std::polar(1.0, 2.0 * sigmas[i]) - std::polar(1.0, c0 - theta * lam);
  }
  return out;
}

}  // namespace zest
