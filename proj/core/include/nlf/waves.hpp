#pragma once

#include <memory>
#include <optional>

#include "nlf/cauchy.hpp"
#include "nlf/grid.hpp"
#include "nlf/kernel.hpp"
#include "nlf/reaction.hpp"

namespace nlf {

enum class Orientation { increasing, decreasing };

enum class SpeedClass { both_positive, c_pos_chat_neg, both_negative };

struct WaveSolution {
  GridFunction profile;
  double speed = 0.0;
  Orientation orientation = Orientation::increasing;
  // sup over non-collar nodes of |c D(phi) - (J*phi - phi + f(phi))|,
  // D the centered difference.
  double residual_norm = 0.0;
  // The profile is translated so that it crosses this level at x = 0.
  double phase_level = 0.0;
  double collar_width = 0.0;
};

struct TrackingOptions {
  double window_lo = -60.0;
  double window_hi = 60.0;
  double h = 0.05;
  double dt = 0.1;
  double T = 80.0;
  double level = 0.5;             // tracked level set
  double transient_fraction = 0.5;  // discard this initial fraction before the fit
  double min_r2 = 0.999;
  double boundary_tol = 1e-6;     // |u(edge) - far field| guard
  double guess_width = 2.0;       // tanh width of the initial step
  bool recenter = true;           // shift by whole cells to keep the front near 0
};

struct TrackingDiagnostics {
  double r2 = 0.0;
  std::size_t fit_points = 0;
  double crossing_span = 0.0;  // total distance traveled by the tracked level
};

// Front tracking: evolve a smoothed step, follow the level-set drift, and
// read the speed off a least-squares line through the crossing positions.
// With u(x,t) = phi(x + c t), the crossing moves at -c, hence the negation.
WaveSolution solve_wave_tracking(const KernelSpec& spec, const IgnitionNonlinearity& nl,
                                 const TrackingOptions& opts,
                                 TrackingDiagnostics* diag = nullptr);

struct NewtonOptions {
  double tol = 1e-11;       // residual sup-norm target
  int max_iter = 60;
  int max_backtracks = 5;
  double collar_sigmas = 10.0;  // far-field clamp width, in kernel std deviations
};

// Damped Newton on the discretized profile equation with unknown speed,
// closed by the phase condition phi(0) = rho and far-field clamping on the
// collars. Throws NewtonStagnationError carrying the best iterate on failure.
WaveSolution solve_wave_newton(const KernelSpec& spec, const IgnitionNonlinearity& nl,
                               const GridFunction& guess, double c_guess,
                               const NewtonOptions& opts);

struct NewtonStagnationError : NonconvergenceError {
  NewtonStagnationError(const std::string& msg, WaveSolution best_iterate)
      : NonconvergenceError(msg), best(std::make_shared<WaveSolution>(std::move(best_iterate))) {}
  std::shared_ptr<WaveSolution> best;
};

GridFunction make_tanh_guess(double window_lo, double window_hi, double h, double rho,
                             double width);

// Trapezoid of f along the profile; the integrand decays exponentially in
// both tails so window truncation is controlled.
double reaction_integral(const WaveSolution& wave, const IgnitionNonlinearity& nl);

// |c + m1 - integral f(phi)| for increasing waves,
// |c + m1 + integral f(phi_hat)| for decreasing ones.
double speed_identity_residual(const WaveSolution& wave, const KernelSpec& spec,
                               const IgnitionNonlinearity& nl);

SpeedClass classify_speeds(double c, double c_hat, double zero_guard = 1e-4);

enum class WaveMethod { tracking, newton, both };

struct WavePair {
  WaveSolution inc;  // (phi, c), 0 -> 1
  WaveSolution dec;  // (phi_hat, c_hat), 1 -> 0, obtained via reflection
  TrackingDiagnostics inc_tracking;
  TrackingDiagnostics dec_tracking;
};

// Solves the increasing wave for J and for the reflected kernel; the latter,
// reflected back, is the nonincreasing wave of the original problem with
// c_hat = -c_reflected.
WavePair solve_wave_pair(const KernelSpec& spec, const IgnitionNonlinearity& nl,
                         WaveMethod method, const TrackingOptions& topts,
                         const NewtonOptions& nopts);

}  // namespace nlf
