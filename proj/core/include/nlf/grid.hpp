#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nlf/kernel.hpp"
#include "nlf/reaction.hpp"

namespace nlf {

// Uniform-grid profile on a truncated line. Outside the window the function
// is extended by its declared far-field constants; profiles here connect two
// distinct constants, so constant extension is the correct closure (periodic
// wrap would fabricate a second front).
struct GridFunction {
  double x0 = 0.0;
  double h = 1.0;
  std::vector<double> v;
  double ff_left = 0.0;
  double ff_right = 0.0;

  std::size_t size() const { return v.size(); }
  double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
  double x_back() const { return x(v.size() - 1); }

  // Value at integer index, indices outside the window give the far fields.
  double at_extended(long i) const {
    if (i < 0) return ff_left;
    if (i >= static_cast<long>(v.size())) return ff_right;
    return v[static_cast<std::size_t>(i)];
  }

  // Piecewise-linear evaluation with far-field extension.
  double eval(double x) const;
  // Four-point Lagrange cubic; used where O(h^2) interpolation error would
  // contaminate tight comparison tolerances.
  double eval_cubic(double x) const;

  double min_value() const;
  double max_value() const;
};

GridFunction make_grid_function(double a, double b, double h, double ff_left, double ff_right);

// Centered differences in the interior, one-sided at the edges.
GridFunction derivative(const GridFunction& u);

// Translate by an integer number of cells; vacated cells take the far field.
GridFunction shift_cells(const GridFunction& u, long cells);

// Spatial reflection x -> -x (far fields swap).
GridFunction reflect(const GridFunction& u);

// Resample onto a new window/step by linear interpolation.
GridFunction resample(const GridFunction& u, double a, double b, double h);

// Discrete convolution (J*u)(x_i) = h sum_j w_j u(x_{i-j}) with far-field
// extension outside the window. Kernel and grid must share the spacing h.
GridFunction convolve(const SampledKernel& k, const GridFunction& u);

// J*u - u + f(u), the right-hand side of the evolution.
GridFunction apply_operator(const SampledKernel& k, const IgnitionNonlinearity& nl,
                            const GridFunction& u);

// Leftmost crossing of `level`, linearly interpolated; exact grid hits win.
double level_crossing(const GridFunction& u, double level);

void write_csv(const GridFunction& u, const std::string& path);
// Binary checkpoint: x0, h (doubles), n (uint64), far fields (doubles), then
// n little-endian 64-bit values.
void write_binary(const GridFunction& u, const std::string& path);
GridFunction read_binary(const std::string& path);

}  // namespace nlf
