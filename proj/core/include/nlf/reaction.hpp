#pragma once

namespace nlf {

// Ignition nonlinearity f(u) = amplitude * (u - rho)^q * (1 - u) on (rho, 2],
// identically zero on [0, rho]. q >= 3 keeps f twice continuously
// differentiable at the ignition threshold; the same formula is negative and
// decreasing on (1, 2], which is the sign behavior required of f above 1.
struct IgnitionNonlinearity {
  double rho = 0.25;
  double amplitude = 1.0;
  int q = 3;

  double f(double u) const;
  double f_prime(double u) const;
  double f_second(double u) const;
};

struct ReactionConstants {
  double M = 0.0;           // max of f over [0, 1]
  double L = 0.0;           // max of f'' over [0, 2]
  double m0 = 0.0;          // f' < 0 on (1 - m0, 2)
  double fprime_max = 0.0;  // max of f' over [0, 1]
};

IgnitionNonlinearity make_ignition(double rho, int q, double amplitude);

// Calibrate the amplitude so that max f' over [0,1] equals target_slope.
IgnitionNonlinearity make_ignition_with_slope(double rho, int q, double target_slope);

ReactionConstants derive_constants(const IgnitionNonlinearity& nl, double tol);

}  // namespace nlf
