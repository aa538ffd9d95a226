#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace nlf {

// Adaptive Simpson quadrature on a finite interval. The error estimate of the
// accepted result is below `tol` for integrands that are smooth on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

// Bracketed root solve: bisection narrowed by Newton steps when a derivative
// is supplied. Requires f(a) and f(b) of opposite sign.
double find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                           double xtol, const std::function<double(double)>& fprime = {});

// Golden-section maximization of a unimodal function; the bracket is first
// tightened by a coarse scan so weak unimodality (flat shoulders) is fine.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double xtol, int scan_points = 256);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// FNV-1a, used to stamp configs into manifests; stable across platforms.
std::uint64_t fnv1a(std::string_view data);

}  // namespace nlf
