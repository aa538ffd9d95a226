#include "nlf/waves.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "nlf/errors.hpp"
#include "nlf/numerics.hpp"

namespace nlf {

namespace {

// Residual of the profile equation c D(phi) = J*phi - phi + f(phi) over the
// given index range, centered differences inside, one-sided at the ends.
double profile_residual_norm(const SampledKernel& k, const IgnitionNonlinearity& nl,
                             const GridFunction& phi, double c, std::size_t i_lo,
                             std::size_t i_hi) {
  const GridFunction rhs = apply_operator(k, nl, phi);
  const GridFunction dphi = derivative(phi);
  double worst = 0.0;
  for (std::size_t i = i_lo; i <= i_hi; ++i) {
    worst = std::max(worst, std::abs(c * dphi.v[i] - rhs.v[i]));
  }
  return worst;
}

long index_of_origin(const GridFunction& u) {
  const double t = -u.x0 / u.h;
  const long i = std::lround(t);
  if (std::abs(t - static_cast<double>(i)) > 1e-6 || i < 0 ||
      i >= static_cast<long>(u.size())) {
    throw GridError("wave solver needs a grid node at x = 0");
  }
  return i;
}

}  // namespace

GridFunction make_tanh_guess(double window_lo, double window_hi, double h, double rho,
                             double width) {
  GridFunction u = make_grid_function(window_lo, window_hi, h, 0.0, 1.0);
  // Shift so the ramp crosses rho at x = 0.
  const double s = -width * std::atanh(2.0 * rho - 1.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u.v[i] = 0.5 * (1.0 + std::tanh((u.x(i) - s) / width));
  }
  return u;
}

WaveSolution solve_wave_tracking(const KernelSpec& spec, const IgnitionNonlinearity& nl,
                                 const TrackingOptions& opts, TrackingDiagnostics* diag) {
  const SampledKernel kern = sample_kernel(spec, opts.h);
  GridFunction u = make_grid_function(opts.window_lo, opts.window_hi, opts.h, 0.0, 1.0);
  {
    const GridFunction ramp =
        make_tanh_guess(opts.window_lo, opts.window_hi, opts.h, 0.5, opts.guess_width);
    u.v = ramp.v;
  }
  Stepper stepper{kern, nl, opts.dt, Scheme::rk4};

  const auto steps = static_cast<std::size_t>(std::llround(opts.T / opts.dt));
  std::vector<double> ts, xs;
  ts.reserve(steps);
  xs.reserve(steps);
  double shift_accum = 0.0;
  const double recenter_threshold = 5.0 * opts.h;

  for (std::size_t s = 1; s <= steps; ++s) {
    stepper.step(u);
    if (u.max_value() > 1.0 + 1e-6 || !std::isfinite(u.v[u.size() / 2])) {
      throw NonconvergenceError("front tracking became unstable");
    }
    double xc = level_crossing(u, opts.level);
    if (opts.recenter && std::abs(xc) > recenter_threshold) {
      const long cells = std::lround(xc / opts.h);
      u = shift_cells(u, cells);
      shift_accum += static_cast<double>(cells) * opts.h;
      xc -= static_cast<double>(cells) * opts.h;
    }
    if (std::abs(u.v.front() - u.ff_left) > opts.boundary_tol ||
        std::abs(u.v.back() - u.ff_right) > opts.boundary_tol) {
      throw WindowError("front reached the window boundary; widen the window");
    }
    ts.push_back(static_cast<double>(s) * opts.dt);
    xs.push_back(xc + shift_accum);
  }

  // Discard the transient, fit the remaining crossing drift.
  const auto first = static_cast<std::size_t>(opts.transient_fraction * ts.size());
  const std::size_t m = ts.size() - first;
  if (m < 10) throw ValidationError("tracking horizon too short for a speed fit");
  const LinearFit fit = fit_line({ts.data() + first, m}, {xs.data() + first, m});
  if (fit.r2 < opts.min_r2) {
    std::ostringstream os;
    os << "crossing drift is not stationary (r2 = " << fit.r2 << ")";
    throw NonconvergenceError(os.str());
  }
  if (diag) {
    diag->r2 = fit.r2;
    diag->fit_points = m;
    diag->crossing_span = std::abs(xs.back() - xs.front());
  }

  WaveSolution sol;
  sol.speed = -fit.slope;
  sol.orientation = Orientation::increasing;
  sol.phase_level = nl.rho;

  // Recenter the final state so the profile crosses rho at x = 0, resampled
  // onto the canonical grid.
  const double xc = level_crossing(u, nl.rho);
  GridFunction prof = make_grid_function(opts.window_lo, opts.window_hi, opts.h, 0.0, 1.0);
  for (std::size_t i = 0; i < prof.size(); ++i) prof.v[i] = u.eval(prof.x(i) + xc);
  sol.profile = std::move(prof);

  const auto margin = static_cast<std::size_t>(
      std::ceil(std::max(kern.radius_left(), kern.radius_right()) / opts.h));
  const std::size_t n = sol.profile.size();
  sol.collar_width = 0.0;
  sol.residual_norm = profile_residual_norm(kern, nl, sol.profile, sol.speed,
                                            std::min(margin, n - 1),
                                            n - 1 - std::min(margin, n - 1));
  return sol;
}

WaveSolution solve_wave_newton(const KernelSpec& spec, const IgnitionNonlinearity& nl,
                               const GridFunction& guess, double c_guess,
                               const NewtonOptions& opts) {
  const double h = guess.h;
  const SampledKernel kern = sample_kernel(spec, h);
  const long n = static_cast<long>(guess.size());
  const long i0 = index_of_origin(guess);

  const long n_collar = std::max(2L, std::lround(opts.collar_sigmas * kern.stddev / h));
  const long f_lo = n_collar;            // first free node
  const long f_hi = n - 1 - n_collar;    // last free node
  if (f_hi - f_lo < 20 || i0 <= f_lo || i0 >= f_hi) {
    throw ValidationError("window too narrow for the requested clamping collars");
  }
  const long nf = f_hi - f_lo + 1;

  GridFunction phi = guess;
  for (long i = 0; i < f_lo; ++i) phi.v[i] = phi.ff_left;
  for (long i = f_hi + 1; i < n; ++i) phi.v[i] = phi.ff_right;
  double c = c_guess;

  const auto residual = [&](const GridFunction& p, double cc) {
    Eigen::VectorXd F(nf + 1);
    const GridFunction rhs = apply_operator(kern, nl, p);
    for (long i = f_lo; i <= f_hi; ++i) {
      const double dp = (p.at_extended(i + 1) - p.at_extended(i - 1)) / (2.0 * h);
      F(i - f_lo) = cc * dp - rhs.v[i];
    }
    F(nf) = p.v[i0] - nl.rho;
    return F;
  };

  Eigen::VectorXd F = residual(phi, c);
  double best_norm = F.lpNorm<Eigen::Infinity>();
  GridFunction best_phi = phi;
  double best_c = c;

  const long m = static_cast<long>(kern.w.size());
  Eigen::MatrixXd J(nf + 1, nf + 1);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if (best_norm <= opts.tol) break;

    J.setZero();
    for (long i = f_lo; i <= f_hi; ++i) {
      const long r = i - f_lo;
      // c * D phi term
      if (i + 1 <= f_hi) J(r, i + 1 - f_lo) += c / (2.0 * h);
      if (i - 1 >= f_lo) J(r, i - 1 - f_lo) -= c / (2.0 * h);
      // -(J*phi) term: d(K*phi)_i / d phi_j = h w[i - j - j_lo]
      const long t_lo = std::max(0L, i - f_hi - kern.j_lo);
      const long t_hi = std::min(m - 1, i - f_lo - kern.j_lo);
      for (long t = t_lo; t <= t_hi; ++t) {
        const long j = i - kern.j_lo - t;
        J(r, j - f_lo) -= h * kern.w[t];
      }
      // +phi - f(phi) term
      J(r, r) += 1.0 - nl.f_prime(phi.v[i]);
      // d/dc
      const double dp = (phi.at_extended(i + 1) - phi.at_extended(i - 1)) / (2.0 * h);
      J(r, nf) = dp;
    }
    J(nf, i0 - f_lo) = 1.0;

    const Eigen::VectorXd delta = J.partialPivLu().solve(-F);

    // Damped line search on the residual sup norm.
    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      GridFunction trial = phi;
      for (long i = f_lo; i <= f_hi; ++i) {
        trial.v[i] = phi.v[i] + lambda * delta(i - f_lo);
      }
      const double trial_c = c + lambda * delta(nf);
      bool in_domain = true;
      for (long i = f_lo; i <= f_hi; ++i) {
        if (trial.v[i] < -1e-6 || trial.v[i] > 2.0) {
          in_domain = false;
          break;
        }
      }
      if (in_domain) {
        const Eigen::VectorXd Ft = residual(trial, trial_c);
        const double norm_t = Ft.lpNorm<Eigen::Infinity>();
        if (norm_t < best_norm) {
          phi = std::move(trial);
          c = trial_c;
          F = Ft;
          best_norm = norm_t;
          best_phi = phi;
          best_c = c;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      WaveSolution best;
      best.profile = best_phi;
      best.speed = best_c;
      best.orientation = Orientation::increasing;
      best.residual_norm = best_norm;
      best.phase_level = nl.rho;
      best.collar_width = static_cast<double>(n_collar) * h;
      std::ostringstream os;
      os << "Newton stagnated at residual " << best_norm << " after " << iter << " iterations";
      throw NewtonStagnationError(os.str(), std::move(best));
    }
  }

  if (best_norm > opts.tol) {
    WaveSolution best;
    best.profile = best_phi;
    best.speed = best_c;
    best.orientation = Orientation::increasing;
    best.residual_norm = best_norm;
    best.phase_level = nl.rho;
    best.collar_width = static_cast<double>(n_collar) * h;
    std::ostringstream os;
    os << "Newton did not reach tol " << opts.tol << " (residual " << best_norm << ")";
    throw NewtonStagnationError(os.str(), std::move(best));
  }

  WaveSolution sol;
  sol.profile = std::move(phi);
  sol.speed = c;
  sol.orientation = Orientation::increasing;
  sol.residual_norm = best_norm;
  sol.phase_level = nl.rho;
  sol.collar_width = static_cast<double>(n_collar) * h;
  return sol;
}

double reaction_integral(const WaveSolution& wave, const IgnitionNonlinearity& nl) {
  const GridFunction& p = wave.profile;
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += nl.f(p.v[i]);
  s -= 0.5 * (nl.f(p.v.front()) + nl.f(p.v.back()));
  return s * p.h;
}

double speed_identity_residual(const WaveSolution& wave, const KernelSpec& spec,
                               const IgnitionNonlinearity& nl) {
  const double m1 = kernel_moment(spec, 1, kQuadTol);
  const double If = reaction_integral(wave, nl);
  if (wave.orientation == Orientation::increasing) {
    return std::abs(wave.speed + m1 - If);
  }
  return std::abs(wave.speed + m1 + If);
}

SpeedClass classify_speeds(double c, double c_hat, double zero_guard) {
  if (std::abs(c) <= zero_guard || std::abs(c_hat) <= zero_guard) {
    throw ValidationError("wave speed within the zero-speed guard; steady fronts unsupported");
  }
  if (c <= c_hat) {
    throw InvariantViolationError("speed ordering c > c_hat violated: this indicates a solver bug");
  }
  if (c < 0.0 && c_hat > 0.0) {
    throw InvariantViolationError("impossible sign pattern c < 0 < c_hat produced by the solver");
  }
  if (c > 0.0 && c_hat > 0.0) return SpeedClass::both_positive;
  if (c > 0.0 && c_hat < 0.0) return SpeedClass::c_pos_chat_neg;
  return SpeedClass::both_negative;
}

WavePair solve_wave_pair(const KernelSpec& spec, const IgnitionNonlinearity& nl,
                         WaveMethod method, const TrackingOptions& topts,
                         const NewtonOptions& nopts) {
  WavePair pair;
  const KernelSpec reflected = kernel_reflect(spec);

  const auto solve_one = [&](const KernelSpec& k, TrackingDiagnostics& tdiag) {
    WaveSolution sol;
    if (method == WaveMethod::tracking || method == WaveMethod::both) {
      sol = solve_wave_tracking(k, nl, topts, &tdiag);
      if (method == WaveMethod::tracking) return sol;
      return solve_wave_newton(k, nl, sol.profile, sol.speed, nopts);
    }
    const GridFunction guess =
        make_tanh_guess(topts.window_lo, topts.window_hi, topts.h, nl.rho, topts.guess_width);
    WaveSolution tmp;
    tmp.profile = guess;
    tmp.orientation = Orientation::increasing;
    // Seed the speed from the integral identity applied to the guess.
    const double c0 = -kernel_moment(k, 1, kQuadTol) +
                      reaction_integral(WaveSolution{guess, 0, Orientation::increasing, 0, 0, 0}, nl);
    return solve_wave_newton(k, nl, guess, c0, nopts);
  };

  pair.inc = solve_one(spec, pair.inc_tracking);

  WaveSolution psi = solve_one(reflected, pair.dec_tracking);
  WaveSolution dec;
  dec.profile = reflect(psi.profile);
  dec.speed = -psi.speed;
  dec.orientation = Orientation::decreasing;
  dec.residual_norm = psi.residual_norm;
  dec.phase_level = psi.phase_level;
  dec.collar_width = psi.collar_width;
  pair.dec = std::move(dec);
  return pair;
}

}  // namespace nlf
