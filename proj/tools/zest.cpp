// Command-line front end: parses a key = value configuration, dispatches the
// toolkit computations, and emits CSV artifacts with reproducible metadata.
// Exit codes: 0 success, 2 validation error, 3 convergence/self-test failure,
// 4 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zest/classical.hpp"
#include "zest/config.hpp"
#include "zest/csv.hpp"
#include "zest/errors.hpp"
#include "zest/numeric.hpp"
#include "zest/parallel.hpp"
#include "zest/phases.hpp"
#include "zest/potential.hpp"
#include "zest/quadrature.hpp"
#include "zest/radial.hpp"
#include "zest/sphere.hpp"

namespace {

constexpr double kPi = zest::detail::kPi;

bool g_verbose = false;

void progress(const std::string& msg) {
  if (g_verbose) std::fprintf(stderr, "zest: %s\n", msg.c_str());
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

std::string default_filename(zest::Command c) {
  return std::string(zest::to_string(c)) + ".csv";
}

std::string resolve_output(const std::string& flag_out, const zest::RunConfig& cfg) {
  std::string path = !flag_out.empty() ? flag_out : cfg.output_path;
  if (path.empty()) path = default_filename(cfg.command);
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    path = (std::filesystem::path(path) / default_filename(cfg.command)).string();
  }
  return path;
}

void model_meta(zest::CsvTable& t, const zest::PotentialModel& m) {
  t.meta("gamma", m.gamma);
  t.meta("mu", m.mu);
  t.meta("R0", m.R0);
  t.meta("cutoff", m.cutoff_mode == zest::CutoffMode::PureHomogeneous ? "pure" : "cut");
  t.meta("v2_beta", m.v2_beta);
  t.meta("v2_eps2", m.v2_eps2);
  t.meta("dim", m.dim);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

double clamp_phase_tol(double tol) { return std::min(std::max(tol, 1e-12), 1e-3); }

// Phase shifts for l = 0..l_max: the WKB closed form where a centrifugal
// barrier exists, the ODE oracle otherwise (s-waves).
std::vector<double> sigma_ladder(const zest::PotentialModel& m, int l_max, double tol,
                                 int threads) {
  return zest::parallel_map<double>(
      static_cast<std::size_t>(l_max) + 1,
      [&m, tol](std::size_t l) {
        const auto ch = zest::turning_point(m, static_cast<int>(l));
        try {
          return zest::wkb_phase_shift(ch).sigma;
        } catch (const zest::regime_error&) {
          return zest::phase_shift(ch, clamp_phase_tol(tol)).sigma;
        }
      },
      threads);
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int run_phase_shifts(const zest::RunConfig& cfg, const std::string& out_path) {
  const auto& m = cfg.model;
  const std::size_t n = static_cast<std::size_t>(cfg.l_max - cfg.l_min) + 1;
  progress("computing " + std::to_string(n) + " partial-wave phase shifts");
  const auto results = zest::parallel_map<zest::PhaseShiftResult>(
      n,
      [&](std::size_t i) {
        const int l = cfg.l_min + static_cast<int>(i);
        return zest::phase_shift(zest::turning_point(m, l), clamp_phase_tol(cfg.tol));
      },
      cfg.threads);

  std::vector<double> ls(n), sigmas(n);
  for (std::size_t i = 0; i < n; ++i) {
    ls[i] = cfg.l_min + static_cast<double>(i);
    sigmas[i] = results[i].sigma;
  }
  const LineFit fit = least_squares(ls, sigmas);
  const double rot = zest::rotation_angle(m.mu);
  const double c0 = zest::global_phase_constant(m);

  zest::CsvTable t;
  t.meta("command", "phase-shifts");
  model_meta(t, m);
  t.meta("l_min", cfg.l_min);
  t.meta("l_max", cfg.l_max);
  t.meta("tol", cfg.tol);
  // sigma_l is asymptotically linear in l: slope -mu*pi/(2(2-mu)), intercept
  // c0/2 - (slope)*(d/2-1) with c0 the global phase constant.
  t.meta("sigma_slope_target", -0.5 * rot);
  t.meta("sigma_intercept_target", 0.5 * c0 - 0.5 * rot * (0.5 * m.dim - 1.0));
  t.meta("sigma_slope_fit", fit.slope);
  t.meta("sigma_intercept_fit", fit.intercept);
  t.header = "l,k,sigma,D,method,uncertainty";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = results[i];
    const int l = cfg.l_min + static_cast<int>(i);
    t.row({zest::fmt_int(l), zest::fmt_g17(l + 0.5 * (m.dim - 3)), zest::fmt_g17(r.sigma),
           zest::fmt_g17(r.D),
           r.method == zest::PhaseShiftResult::Method::OdeOracle ? "ode-oracle"
                                                                 : "wkb-closed-form",
           zest::fmt_g17(r.uncertainty)});
  }
  zest::write_csv(out_path, t);
  progress("wrote " + out_path);
  return 0;
}

void kernel_rows(zest::CsvTable& t, const zest::KernelGrid& grid) {
  t.header = "w,re,im,abs";
  for (std::size_t i = 0; i < grid.w.size(); ++i) {
    t.row({zest::fmt_g17(grid.w[i]), zest::fmt_g17(grid.values[i].real()),
           zest::fmt_g17(grid.values[i].imag()), zest::fmt_g17(std::abs(grid.values[i]))});
  }
}

void grid_meta(zest::CsvTable& t, const zest::RunConfig& cfg) {
  t.meta("L_max", cfg.big_l_max);
  t.meta("grid_size", cfg.grid_size);
  t.meta("smoothing", zest::to_string(cfg.smoothing));
  t.meta("smoothing_param", cfg.smoothing_param);
}

int run_kernel(const zest::RunConfig& cfg, const std::string& out_path) {
  const auto& m = cfg.model;
  progress("computing phase shifts up to l = " + std::to_string(cfg.big_l_max));
  const auto sigmas = sigma_ladder(m, cfg.big_l_max, cfg.tol, cfg.threads);
  const zest::GridSpec spec{cfg.grid_size, cfg.big_l_max, cfg.smoothing, cfg.smoothing_param,
                            cfg.threads};
  progress("synthesizing the scattering kernel");
  const auto grid = zest::s0_kernel(m, m.dim, sigmas, spec);
  const auto peak = zest::singularity_locator(grid);

  zest::CsvTable t;
  t.meta("command", "kernel");
  model_meta(t, m);
  grid_meta(t, cfg);
  t.meta("tol", cfg.tol);
  t.meta("expected_peak_w", std::cos(zest::rotation_angle(m.mu)));
  t.meta("global_phase_constant", zest::global_phase_constant(m));
  t.meta("found_peak_w", peak.found ? zest::fmt_g17(peak.w_peak) : "none");
  t.meta("peak_sharpness", peak.sharpness);
  kernel_rows(t, grid);
  zest::write_csv(out_path, t);
  progress("wrote " + out_path);
  return 0;
}

int run_wave_kernel(const zest::RunConfig& cfg, const std::string& out_path) {
  const zest::GridSpec spec{cfg.grid_size, cfg.big_l_max, cfg.smoothing, cfg.smoothing_param,
                            cfg.threads};
  progress("synthesizing the half-wave kernel");
  const auto grid = zest::wave_kernel_series(cfg.model.dim, cfg.theta, spec);

  zest::CsvTable t;
  t.meta("command", "wave-kernel");
  t.meta("dim", cfg.model.dim);
  t.meta("theta", cfg.theta);
  grid_meta(t, cfg);
  kernel_rows(t, grid);
  zest::write_csv(out_path, t);
  progress("wrote " + out_path);
  return 0;
}

// Zero-energy launch geometry: exact scale copies of a validated shallow
// reference orbit (offset 141, launch distance 2000, horizon 1e9), rescaled
// by the scaling symmetry r -> c r, t -> c^(1+mu/2) t.
struct OrbitRun {
  double deflection = 0.0;
  zest::PolarInvariantReport polar;
};

OrbitRun run_one_orbit(const zest::PotentialModel& m_in, double b, double tol) {
  zest::PotentialModel m = m_in;
  m.dim = 2;  // central-force orbits are planar; integrate in the orbit plane
  const double c = b / 141.0;
  const double x0 = 2000.0 * c;
  const double t_end = 4e9 * std::pow(c, 1.0 + 0.5 * m.mu);
  const double r = std::hypot(x0, b);
  const double speed = std::sqrt(-2.0 * zest::eval_potential(m, r));
  const auto traj = zest::integrate_orbit(m, {x0, b}, {-speed, 0.0}, t_end, tol);
  OrbitRun out;
  out.deflection = zest::deflection_angle(traj);
  out.polar = zest::polar_invariant_residual(traj);
  return out;
}

int run_orbit(const zest::RunConfig& cfg, const std::string& out_path) {
  const auto& m = cfg.model;
  const double target = zest::rotation_angle(m.mu);
  zest::CsvTable t;
  t.meta("command", "orbit");
  model_meta(t, m);
  t.meta("b_list_size", static_cast<int>(cfg.b_list.size()));
  t.meta("tol", cfg.tol);
  t.meta("deflection_target", target);
  t.header = "b,deflection,target,abs_err,polar_residual,r_crit,theta_perihelion";
  for (double b : cfg.b_list) {
    progress("integrating orbit at offset " + zest::fmt_g17(b));
    const auto run = run_one_orbit(m, b, cfg.tol);
    t.row({zest::fmt_g17(b), zest::fmt_g17(run.deflection), zest::fmt_g17(target),
           zest::fmt_g17(std::fabs(run.deflection - target)),
           zest::fmt_g17(run.polar.max_residual), zest::fmt_g17(run.polar.r_crit),
           zest::fmt_g17(run.polar.theta_perihelion)});
  }
  zest::write_csv(out_path, t);
  progress("wrote " + out_path);
  return 0;
}

int run_flow(const zest::RunConfig& cfg, const std::string& out_path) {
  const double mu = cfg.model.mu;
  const double k = cfg.flow_k;
  zest::ReducedState z0;
  z0.xhat = {1.0, 0.0};
  z0.b = 0.0;
  z0.cbar = {0.0, std::sqrt(k)};

  progress("integrating the reduced flow");
  const auto neg = zest::reduced_flow(z0, -cfg.tau_max, zest::FlowMode::Simplified, mu);
  const auto pos = zest::reduced_flow(z0, cfg.tau_max, zest::FlowMode::Simplified, mu);

  // hyperbolic-tangent law of the on-shell speed component
  auto law = [k, mu](double tau) {
    return std::sqrt(k) * std::tanh(std::sqrt(k) * (1.0 - 0.5 * mu) * tau);
  };

  zest::CsvTable t;
  t.meta("command", "flow");
  t.meta("mu", mu);
  t.meta("flow_k", k);
  t.meta("tau_max", cfg.tau_max);
  t.header = "tau,b,target,residual";
  double worst = 0.0;
  auto emit = [&](double tau, double b) {
    const double want = law(tau);
    worst = std::max(worst, std::fabs(b - want));
    t.row({zest::fmt_g17(tau), zest::fmt_g17(b), zest::fmt_g17(want),
           zest::fmt_g17(b - want)});
  };
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) {
    if (it->first == 0.0) continue;
    emit(it->first, it->second.b);
  }
  for (const auto& [tau, z] : pos) emit(tau, z.b);

  // full-flow agreement on the unit shell (where the off-shell coupling dies)
  zest::ReducedState shell;
  shell.xhat = {1.0, 0.0};
  shell.b = -0.6;
  shell.cbar = {0.0, 0.8};
  const auto full = zest::reduced_flow(shell, 5.0, zest::FlowMode::Full, mu);
  const auto simp = zest::reduced_flow(shell, 5.0, zest::FlowMode::Simplified, mu);
  const auto& zf = full.back().second;
  const auto& zs = simp.back().second;
  double gap = std::fabs(zf.b - zs.b);
  for (int i = 0; i < 2; ++i) {
    gap = std::max(gap, std::fabs(zf.xhat[i] - zs.xhat[i]));
    gap = std::max(gap, std::fabs(zf.cbar[i] - zs.cbar[i]));
  }
  t.metadata.emplace_back("max_abs_residual", zest::fmt_g17(worst));
  t.metadata.emplace_back("full_vs_simplified_shell_gap", zest::fmt_g17(gap));
  zest::write_csv(out_path, t);
  progress("wrote " + out_path);
  return 0;
}

int run_phases(const zest::RunConfig& cfg, const std::string& out_path) {
  const auto& m = cfg.model;
  zest::CsvTable t;
  t.meta("command", "phases");
  model_meta(t, m);
  t.meta("modifier", "dollard");
  t.meta("tol", cfg.tol);
  t.meta("regime",
         zest::to_string(zest::asymptotic_constants(m, std::min(cfg.tol, 1e-10)).regime));
  t.header = "lambda,value,asymptotic,rel_err";
  for (double lambda : cfg.lambda_ladder) {
    const auto r = zest::psi_dol_result(m, lambda, std::min(cfg.tol, 1e-10));
    const double rel =
        std::fabs(r.value - r.asymptotic_value) / std::fabs(r.asymptotic_value);
    t.row({zest::fmt_g17(lambda), zest::fmt_g17(r.value), zest::fmt_g17(r.asymptotic_value),
           zest::fmt_g17(rel)});
  }
  zest::write_csv(out_path, t);
  progress("wrote " + out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// selftest: the identity suite
// ---------------------------------------------------------------------------

struct Identity {
  std::string name;
  double measured = 0.0;
  double tol = 0.0;
  bool pass() const { return measured <= tol; }
};

Identity check_polar_quadrature() {
  // integral over (1, inf) of sqrt(r^-mu - r^-2) - sqrt(r^-mu) at mu = 1
  // equals (2 - pi)/(2 - mu); conjugate form avoids the large-r cancellation.
  const double mu = 1.0;
  auto f = [mu](double r) {
    const double lead = std::pow(r, -0.5 * mu);
    const double root = std::sqrt(std::max(std::pow(r, -mu) - std::pow(r, -2.0), 0.0));
    return -std::pow(r, -2.0) / (root + lead);
  };
  const double v = zest::integrate_alg_left(f, 1.0, 2.0, 0.5) +
                   zest::integrate_tail(f, 2.0, 2.0 - 0.5 * mu);
  return {"polar quadrature identity", std::fabs(v - (2.0 - kPi) / (2.0 - mu)), 1e-8};
}

Identity check_generating_functions() {
  const double t = 0.3, w = 0.5;
  double acc = 0.0, tl = 1.0;
  for (int l = 1; l <= 80; ++l) {
    tl *= t;
    acc += 2.0 * tl / l * zest::tchebyshev(l, w);
  }
  const double circle = std::fabs(acc + std::log(1.0 - 2.0 * w * t + t * t));

  const double alpha = 1.5, t2 = 0.4, w2 = -0.3;
  double acc2 = 0.0, t2l = 1.0;
  for (int l = 0; l <= 150; ++l) {
    acc2 += t2l * zest::gegenbauer(alpha, l, w2);
    t2l *= t2;
  }
  const double gb = std::fabs(acc2 - std::pow(1.0 - 2.0 * w2 * t2 + t2 * t2, -alpha));
  return {"generating functions", std::max(circle, gb), 1e-9};
}

Identity check_tanh_law() {
  zest::ReducedState z0;
  z0.xhat = {1.0, 0.0};
  z0.b = 0.0;
  z0.cbar = {0.0, 1.0};
  const auto out = zest::reduced_flow(z0, 2.0, zest::FlowMode::Simplified, 1.0);
  return {"reduced-flow tanh law", std::fabs(out.back().second.b - std::tanh(1.0)), 1e-9};
}

Identity check_h_closed_form() {
  zest::PotentialModel m;
  m.gamma = 0.5;
  m.mu = 1.0;
  m.cutoff_mode = zest::CutoffMode::PureHomogeneous;
  m.validate();
  // pure tail at lambda = 0: h(r) = sqrt(2 gamma) (1 - mu/2) r^(1 - mu/2)
  const double r = 4.0;
  const double want = std::sqrt(2.0 * m.gamma) * (1.0 - 0.5 * m.mu) * std::pow(r, 0.5);
  return {"h closed form", std::fabs(zest::eval_h(m, r, 0.0) - want), 1e-10};
}

Identity check_eikonal_residual() {
  zest::PotentialModel m;
  m.gamma = 0.5;
  m.mu = 1.0;
  m.dim = 3;
  m.cutoff_mode = zest::CutoffMode::PureHomogeneous;
  m.validate();
  double worst = 0.0;
  for (double lambda : {0.0, 0.3}) {
    for (double th : {0.0, 0.2}) {
      const double r = 3.0, hr = 1e-5 * r, hth = 1e-5;
      const double dr = (zest::eikonal_phase_sph(m, r + hr, th, lambda) -
                         zest::eikonal_phase_sph(m, r - hr, th, lambda)) /
                        (2.0 * hr);
      const double dth = (zest::eikonal_phase_sph(m, r, th + hth, lambda) -
                          zest::eikonal_phase_sph(m, r, th - hth, lambda)) /
                         (2.0 * hth);
      const double res =
          0.5 * (dr * dr + dth * dth / (r * r)) + zest::eval_potential(m, r) - lambda;
      worst = std::max(worst, std::fabs(res));
    }
  }
  return {"eikonal residual", worst, 1e-5};
}

int run_selftest() {
  const Identity checks[] = {check_polar_quadrature(), check_generating_functions(),
                             check_tanh_law(), check_h_closed_form(),
                             check_eikonal_residual()};
  bool all = true;
  std::printf("%-28s %-6s %12s %10s\n", "identity", "status", "measured", "tolerance");
  for (const auto& c : checks) {
    const bool ok = c.pass();
    all = all && ok;
    std::printf("%-28s %-6s %12.3e %10.1e\n", c.name.c_str(), ok ? "pass" : "FAIL",
                c.measured, c.tol);
  }
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-energy scattering toolkit for attractive power-law tails"};
  app.require_subcommand(0, 1);

  std::string config_path, out_flag;
  int threads_flag = -1;
  app.add_option("--config", config_path, "configuration file (key = value sections)");
  app.add_option("--out", out_flag, "output CSV path (file, or existing directory)");
  app.add_option("--threads", threads_flag, "parallelism degree (0 = auto)");
  app.add_flag("--verbose", g_verbose, "progress messages on stderr");

  std::vector<std::pair<std::string, zest::Command>> names = {
      {"phase-shifts", zest::Command::PhaseShifts},
      {"kernel", zest::Command::Kernel},
      {"wave-kernel", zest::Command::WaveKernel},
      {"orbit", zest::Command::Orbit},
      {"flow", zest::Command::Flow},
      {"phases", zest::Command::Phases},
      {"selftest", zest::Command::Selftest},
  };
  for (auto& [name, cmd] : names) {
    auto* sub = app.add_subcommand(name, "");
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  zest::RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "zest: cannot read config file: %s\n", config_path.c_str());
      return 4;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    const auto parsed = zest::parse_config(ss.str());
    if (!parsed.ok()) {
      std::fputs(zest::format_diagnostics(parsed, config_path).c_str(), stderr);
      return 2;
    }
    cfg = parsed.config;
  }

  std::optional<zest::Command> cli_cmd;
  for (auto& [name, cmd] : names) {
    if (app.got_subcommand(name)) cli_cmd = cmd;
  }
  if (cli_cmd) {
    if (cfg.command_set && *cli_cmd != cfg.command) {
      std::fprintf(stderr, "zest: command '%s' on the command line conflicts with '%s' in %s\n",
                   zest::to_string(*cli_cmd), zest::to_string(cfg.command),
                   config_path.c_str());
      return 2;
    }
    cfg.command = *cli_cmd;
  } else if (!cfg.command_set) {
    std::fprintf(stderr, "zest: no command given (subcommand or 'command =' config key); "
                         "see --help\n");
    return 2;
  }
  if (threads_flag >= 0) cfg.threads = threads_flag;

  try {
    if (cfg.command == zest::Command::Selftest) return run_selftest();
    const std::string out_path = resolve_output(out_flag, cfg);
    switch (cfg.command) {
      case zest::Command::PhaseShifts: return run_phase_shifts(cfg, out_path);
      case zest::Command::Kernel: return run_kernel(cfg, out_path);
      case zest::Command::WaveKernel: return run_wave_kernel(cfg, out_path);
      case zest::Command::Orbit: return run_orbit(cfg, out_path);
      case zest::Command::Flow: return run_flow(cfg, out_path);
      case zest::Command::Phases: return run_phases(cfg, out_path);
      case zest::Command::Selftest: return run_selftest();
    }
  } catch (const zest::validation_error& e) {
    std::fprintf(stderr, "zest: validation error: %s\n", e.what());
    return 2;
  } catch (const zest::regime_error& e) {
    std::fprintf(stderr, "zest: regime error: %s\n", e.what());
    return 2;
  } catch (const zest::io_error& e) {
    std::fprintf(stderr, "zest: i/o error: %s\n", e.what());
    return 4;
  } catch (const zest::near_collision_error& e) {
    std::fprintf(stderr, "zest: convergence error: %s\n", e.what());
    return 3;
  } catch (const zest::convergence_error& e) {
    std::fprintf(stderr, "zest: convergence error: %s\n", e.what());
    return 3;
  }
  return 0;
}
