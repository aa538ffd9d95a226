#include "nlf/reaction.hpp"

#include <cmath>
#include <string>

#include "nlf/errors.hpp"
#include "nlf/numerics.hpp"

namespace nlf {

namespace {

constexpr double kDomainSlack = 1e-8;

void check_domain(double u) {
  if (u < -kDomainSlack || u > 2.0 + kDomainSlack) {
    throw DomainError("reaction argument " + std::to_string(u) + " outside [0, 2]");
  }
}

void validate(double rho, int q, double amplitude) {
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("ignition threshold rho must be in (0,1)");
  if (q < 3) throw ValidationError("smoothness exponent q must be >= 3");
  if (!(amplitude > 0.0)) throw ValidationError("reaction amplitude must be > 0");
}

}  // namespace

double IgnitionNonlinearity::f(double u) const {
  check_domain(u);
  if (u <= rho) return 0.0;
  return amplitude * std::pow(u - rho, q) * (1.0 - u);
}

double IgnitionNonlinearity::f_prime(double u) const {
  check_domain(u);
  if (u <= rho) return 0.0;
  const double d = u - rho;
  return amplitude * std::pow(d, q - 1) * (q * (1.0 - u) - d);
}

double IgnitionNonlinearity::f_second(double u) const {
  check_domain(u);
  if (u <= rho) return 0.0;
  const double d = u - rho;
  return amplitude * std::pow(d, q - 2) * ((q - 1) * (q * (1.0 - u) - d) - (q + 1) * d);
}

IgnitionNonlinearity make_ignition(double rho, int q, double amplitude) {
  validate(rho, q, amplitude);
  return IgnitionNonlinearity{rho, amplitude, q};
}

IgnitionNonlinearity make_ignition_with_slope(double rho, int q, double target_slope) {
  validate(rho, q, 1.0);
  if (!(target_slope > 0.0 && target_slope < 1.0)) {
    throw ValidationError("target max f' must be in (0, 1)");
  }
  IgnitionNonlinearity unit{rho, 1.0, q};
  const double unit_max = golden_max([&](double u) { return unit.f_prime(u); }, rho, 1.0, 1e-13);
  return IgnitionNonlinearity{rho, target_slope / unit_max, q};
}

ReactionConstants derive_constants(const IgnitionNonlinearity& nl, double tol) {
  if (!(tol > 0.0)) throw ValidationError("derive_constants: tol must be > 0");
  ReactionConstants rc;
  rc.M = golden_max([&](double u) { return nl.f(u); }, nl.rho, 1.0, tol);
  rc.L = golden_max([&](double u) { return nl.f_second(u); }, nl.rho, 2.0, tol);
  rc.fprime_max = golden_max([&](double u) { return nl.f_prime(u); }, nl.rho, 1.0, tol);
  if (rc.fprime_max >= 1.0) {
    throw ValidationError("max f' = " + std::to_string(rc.fprime_max) +
                          " >= 1; reduce the reaction amplitude");
  }

  // Largest m0 in (0,1) with f' < 0 on (1-m0, 2), located by bisection on the
  // sign of max f' over that interval.
  const auto max_fprime_above = [&](double m0) {
    return golden_max([&](double u) { return nl.f_prime(u); }, 1.0 - m0, 2.0, 1e-12);
  };
  double lo = 1e-9, hi = 1.0 - 1e-9;
  if (max_fprime_above(lo) >= 0.0) {
    throw ValidationError("f' is not negative immediately left of u=1");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (max_fprime_above(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  rc.m0 = lo;
  return rc;
}

}  // namespace nlf
