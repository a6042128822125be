// Generates the frozen reference values used by the phase-modifier tests.
//
// Everything here is computed independently of the library: long-double
// tanh-sinh quadrature in the *physical* radial variable (the library works
// in the scaled variable), with the inversion r = R0 / v mapping the tail
// onto (0, 1].  Each integrand is written in a cancellation-free conjugate
// form with a large-argument branch, so it stays finite at the
// doubly-exponential endpoint nodes.  As a self-check of the conjugation
// algebra, the raw (subtractive) form is also integrated over a truncated
// interval where it is representable, and the gap against the conjugate form
// on the same interval is printed; the full-interval conjugate value is the
// one to freeze.
//
// Usage: gen_phase_oracles   (no arguments; prints a table to stdout)

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdio>
#include <functional>

namespace {

// long double overloads of the std math functions
using std::fabs;
using std::log;
using std::pow;
using std::sqrt;

boost::math::quadrature::tanh_sinh<long double>& quad() {
  static boost::math::quadrature::tanh_sinh<long double> q(15);
  return q;
}

long double integrate(const std::function<long double(long double)>& f, long double lo,
                      long double hi) {
  long double err = 0.0L, l1 = 0.0L;
  return quad().integrate(f, lo, hi, 1.0e-18L, &err, &l1);
}

// 1 - sqrt(1 + y^2)  ==  -y^2 / (1 + sqrt(1 + y^2)), safe for huge y.
long double born_free_conj(long double y) {
  if (y > 2.0L) return -y / (1.0L / y + sqrt(1.0L / (y * y) + 1.0L));
  return -y * y / (1.0L + sqrt(1.0L + y * y));
}

// 1 - sqrt(1 + x) + x/2  ==  (x^2/4) / (1 + x/2 + sqrt(1 + x)), x = y^2.
long double with_born_conj(long double y) {
  const long double x = y * y;
  if (x > 2.0L) return 0.25L * x / (1.0L / x + 0.5L + sqrt(1.0L / (x * x) + 1.0L / x));
  return 0.25L * x * x / (1.0L + 0.5L * x + sqrt(1.0L + x));
}

struct Params {
  long double gamma;
  long double mu;
  long double R0;
  long double lambda;
};

// psi_sr = int_R0^inf [ sqrt(2L) - sqrt(2L + 2 g r^-mu) ] dr, via r = R0/v:
// integrand(v) = -2 g R0^(1-mu) v^(mu-2) / (p + sqrt(p^2 + w)), w = 2 g (v/R0)^mu.
long double psi_sr_phys(const Params& P, long double lo, bool conjugate) {
  const long double p = sqrt(2.0L * P.lambda);
  auto f = [&](long double v) -> long double {
    const long double w = 2.0L * P.gamma * pow(v / P.R0, P.mu);
    const long double q = sqrt(p * p + w);
    if (conjugate)
      return -2.0L * P.gamma * pow(P.R0, 1.0L - P.mu) * pow(v, P.mu - 2.0L) / (p + q);
    return (p - q) * P.R0 / (v * v);
  };
  return integrate(f, lo, 1.0L);
}

// psi_dol adds the Born term w/(2p); conjugate integrand(v) =
// 2 g^2 R0^(1-2mu) v^(2mu-2) / (p (p + q)^2).
long double psi_dol_phys(const Params& P, long double lo, bool conjugate) {
  const long double p = sqrt(2.0L * P.lambda);
  auto f = [&](long double v) -> long double {
    const long double w = 2.0L * P.gamma * pow(v / P.R0, P.mu);
    const long double q = sqrt(p * p + w);
    if (conjugate)
      return 2.0L * P.gamma * P.gamma * pow(P.R0, 1.0L - 2.0L * P.mu) *
             pow(v, 2.0L * P.mu - 2.0L) / (p * (p + q) * (p + q));
    return (p - q + w / (2.0L * p)) * P.R0 / (v * v);
  };
  return integrate(f, lo, 1.0L);
}

// C_mu = int_0^inf [ 1 - sqrt(1 + 2 g s^-mu) + g s^-mu ] ds for mu in (1/2,1),
// split at 1 with s = 1/v on the tail; y = sqrt(2 g) s^(-mu/2).  The tail
// integrand combines the v powers analytically so it stays finite down to
// denormal nodes.
long double c_mu(long double gamma, long double mu, long double lo, bool conjugate) {
  auto val = [&](long double s) -> long double {
    const long double y = sqrt(2.0L * gamma) * pow(s, -0.5L * mu);
    if (conjugate) return with_born_conj(y);
    return 1.0L - sqrt(1.0L + y * y) + 0.5L * y * y;
  };
  auto tail = [&](long double v) -> long double {
    const long double x = 2.0L * gamma * pow(v, mu);
    if (conjugate)
      return gamma * gamma * pow(v, 2.0L * mu - 2.0L) /
             (1.0L + 0.5L * x + sqrt(1.0L + x));
    return (1.0L - sqrt(1.0L + x) + 0.5L * x) / (v * v);
  };
  return integrate(val, lo, 1.0L) + integrate(tail, lo, 1.0L);
}

// C_1 = int_1^inf [1 - sqrt(1+2g/s) + g/s] ds
//     + int_0^1 [1 - sqrt(1+2g/s)] ds - g ln R0.
long double c_one(long double gamma, long double R0, long double lo, bool conjugate) {
  auto head = [&](long double s) -> long double {
    const long double y = sqrt(2.0L * gamma / s);
    if (conjugate) return born_free_conj(y);
    return 1.0L - sqrt(1.0L + y * y);
  };
  auto tail = [&](long double v) -> long double {
    const long double x = 2.0L * gamma * v;
    if (conjugate) return gamma * gamma / (1.0L + 0.5L * x + sqrt(1.0L + x));
    return (1.0L - sqrt(1.0L + x) + 0.5L * x) / (v * v);
  };
  return integrate(tail, lo, 1.0L) + integrate(head, lo, 1.0L) - gamma * log(R0);
}

// K_sr = int_0^inf [ 1 - sqrt(1 + 2 g s^-mu) ] ds for mu > 1, split at 1.
long double k_sr(long double gamma, long double mu, long double lo, bool conjugate) {
  auto val = [&](long double s) -> long double {
    const long double y = sqrt(2.0L * gamma) * pow(s, -0.5L * mu);
    if (conjugate) return born_free_conj(y);
    return 1.0L - sqrt(1.0L + y * y);
  };
  auto tail = [&](long double v) -> long double {
    const long double x = 2.0L * gamma * pow(v, mu);
    if (conjugate) return -2.0L * gamma * pow(v, mu - 2.0L) / (1.0L + sqrt(1.0L + x));
    return (1.0L - sqrt(1.0L + x)) / (v * v);
  };
  return integrate(val, lo, 1.0L) + integrate(tail, lo, 1.0L);
}

void report(const char* name, long double frozen, long double conj_trunc,
            long double raw_trunc) {
  std::printf("%-34s % .18Le   raw-vs-conjugate gap % .2Le\n", name, frozen,
              fabs(conj_trunc - raw_trunc));
}

}  // namespace

int main() {
  std::printf("phase-modifier reference values (conjugate-form tanh-sinh, long double)\n");
  std::printf("algebra check: truncated-interval raw vs conjugate integrals\n\n");

  const long double kLo = 1.0e-3L;  // truncation for the raw-form algebra check

  const Params sr15{1.0L, 1.5L, 1.0L, 0.01L};
  report("psi_sr  mu=1.5 g=1 R0=1 L=0.01", psi_sr_phys(sr15, 0.0L, true),
         psi_sr_phys(sr15, kLo, true), psi_sr_phys(sr15, kLo, false));
  report("psi_dol mu=1.5 g=1 R0=1 L=0.01", psi_dol_phys(sr15, 0.0L, true),
         psi_dol_phys(sr15, kLo, true), psi_dol_phys(sr15, kLo, false));

  const Params dol075{1.0L, 0.75L, 1.0L, 0.01L};
  report("psi_dol mu=0.75 g=1 R0=1 L=0.01", psi_dol_phys(dol075, 0.0L, true),
         psi_dol_phys(dol075, kLo, true), psi_dol_phys(dol075, kLo, false));

  const Params dol1{1.0L, 1.0L, 1.0L, 0.01L};
  report("psi_dol mu=1 g=1 R0=1 L=0.01", psi_dol_phys(dol1, 0.0L, true),
         psi_dol_phys(dol1, kLo, true), psi_dol_phys(dol1, kLo, false));

  report("C_mu    mu=0.75 g=1", c_mu(1.0L, 0.75L, 0.0L, true), c_mu(1.0L, 0.75L, kLo, true),
         c_mu(1.0L, 0.75L, kLo, false));
  report("C_1     g=1 R0=1", c_one(1.0L, 1.0L, 0.0L, true), c_one(1.0L, 1.0L, kLo, true),
         c_one(1.0L, 1.0L, kLo, false));
  report("K_sr    mu=1.5 g=1", k_sr(1.0L, 1.5L, 0.0L, true), k_sr(1.0L, 1.5L, kLo, true),
         k_sr(1.0L, 1.5L, kLo, false));

  return 0;
}
