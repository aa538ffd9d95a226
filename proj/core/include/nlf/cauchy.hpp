#pragma once

#include <vector>

#include "nlf/grid.hpp"

namespace nlf {

enum class Scheme { rk4, euler };

struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> states;
  Scheme scheme = Scheme::rk4;
  double dt = 0.0;
};

// Explicit stepping of du/dt = J*u - u + f(u). The nonlocal operator is
// bounded, so there is no stiffness to fight; the spec'd stability budget is
// dt <= 0.5 / (1 + max f').
struct Stepper {
  const SampledKernel& kernel;
  const IgnitionNonlinearity& nl;
  double dt;
  Scheme scheme = Scheme::rk4;

  GridFunction rhs(const GridFunction& u) const { return apply_operator(kernel, nl, u); }
  void step(GridFunction& u) const;
};

double stability_budget(double fprime_max);

// Integrate to time T (within one dt); snapshots recorded every
// `snapshot_stride` steps plus the final state. Throws on blow-up.
Trajectory integrate(const SampledKernel& kernel, const IgnitionNonlinearity& nl,
                     const GridFunction& u0, double T, double dt, Scheme scheme,
                     std::size_t snapshot_stride = 10);

struct ComparisonReport {
  double max_violation = 0.0;  // max over (x,t) of (u - v)_+
  bool passed = false;
  double tolerance = 0.0;
};

// Integrates the ordered pair (u0 <= v0) with identical scheme and steps and
// reports the worst ordering violation. Report-valued, not throwing: the
// violation is the test's output.
ComparisonReport comparison_test(const SampledKernel& kernel, const IgnitionNonlinearity& nl,
                                 const GridFunction& u0, const GridFunction& v0, double T,
                                 double dt, double tolerance = 1e-10);

struct RegularityEstimate {
  double C1 = 0.0;  // sup |u(x+eta,t) - u(x,t)| / eta
  double C2 = 0.0;  // same quotient for du/dt (evaluated from the right-hand side)
};

RegularityEstimate regularity_probe(const Trajectory& traj, const SampledKernel& kernel,
                                    const IgnitionNonlinearity& nl, double eta);

}  // namespace nlf
