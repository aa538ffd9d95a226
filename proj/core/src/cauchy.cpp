#include "nlf/cauchy.hpp"

#include <cmath>
#include <string>

#include "nlf/errors.hpp"

namespace nlf {

namespace {

constexpr double kBlowupBudget = 1e-6;

void axpy(GridFunction& y, double a, const GridFunction& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y.v[i] += a * x.v[i];
}

}  // namespace

double stability_budget(double fprime_max) { return 0.5 / (1.0 + fprime_max); }

void Stepper::step(GridFunction& u) const {
  if (scheme == Scheme::euler) {
    const GridFunction k1 = rhs(u);
    axpy(u, dt, k1);
    return;
  }
  const GridFunction k1 = rhs(u);
  GridFunction tmp = u;
  axpy(tmp, 0.5 * dt, k1);
  const GridFunction k2 = rhs(tmp);
  tmp = u;
  axpy(tmp, 0.5 * dt, k2);
  const GridFunction k3 = rhs(tmp);
  tmp = u;
  axpy(tmp, dt, k3);
  const GridFunction k4 = rhs(tmp);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u.v[i] += dt / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
  }
}

Trajectory integrate(const SampledKernel& kernel, const IgnitionNonlinearity& nl,
                     const GridFunction& u0, double T, double dt, Scheme scheme,
                     std::size_t snapshot_stride) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw ValidationError("integrate: need dt > 0 and T >= 0");
  Trajectory traj;
  traj.scheme = scheme;
  traj.dt = dt;
  Stepper stepper{kernel, nl, dt, scheme};
  GridFunction u = u0;
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  traj.times.push_back(0.0);
  traj.states.push_back(u);
  for (std::size_t s = 1; s <= steps; ++s) {
    stepper.step(u);
    if (u.max_value() > 1.0 + kBlowupBudget || u.min_value() < -kBlowupBudget ||
        !std::isfinite(u.v[u.size() / 2])) {
      throw NonconvergenceError("integration left [0,1] beyond budget at t=" +
                                std::to_string(s * dt));
    }
    if (s % snapshot_stride == 0 || s == steps) {
      traj.times.push_back(static_cast<double>(s) * dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

ComparisonReport comparison_test(const SampledKernel& kernel, const IgnitionNonlinearity& nl,
                                 const GridFunction& u0, const GridFunction& v0, double T,
                                 double dt, double tolerance) {
  if (u0.size() != v0.size()) throw GridError("comparison_test: size mismatch");
  for (std::size_t i = 0; i < u0.size(); ++i) {
    if (u0.v[i] > v0.v[i]) throw ValidationError("comparison_test: u0 <= v0 violated at input");
  }
  Stepper stepper{kernel, nl, dt, Scheme::rk4};
  GridFunction u = u0, v = v0;
  ComparisonReport rep;
  rep.tolerance = tolerance;
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  for (std::size_t s = 0; s < steps; ++s) {
    stepper.step(u);
    stepper.step(v);
    for (std::size_t i = 0; i < u.size(); ++i) {
      rep.max_violation = std::max(rep.max_violation, u.v[i] - v.v[i]);
    }
  }
  rep.passed = rep.max_violation <= tolerance;
  return rep;
}

RegularityEstimate regularity_probe(const Trajectory& traj, const SampledKernel& kernel,
                                    const IgnitionNonlinearity& nl, double eta) {
  if (traj.states.empty()) throw ValidationError("regularity_probe: empty trajectory");
  const double h = traj.states.front().h;
  const auto cells = static_cast<long>(std::llround(eta / h));
  if (cells < 1 || std::abs(cells * h - eta) > 1e-9 * eta) {
    throw ValidationError("regularity_probe: eta must be a positive multiple of h");
  }
  RegularityEstimate est;
  for (const auto& u : traj.states) {
    const GridFunction dudt = apply_operator(kernel, nl, u);
    const long n = static_cast<long>(u.size());
    for (long i = 0; i + cells < n; ++i) {
      est.C1 = std::max(est.C1, std::abs(u.v[i + cells] - u.v[i]) / eta);
      est.C2 = std::max(est.C2, std::abs(dudt.v[i + cells] - dudt.v[i]) / eta);
    }
  }
  return est;
}

}  // namespace nlf
