#include "nlf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "nlf/errors.hpp"

namespace nlf {

namespace {

constexpr double kSpacingRelTol = 1e-9;

bool spacing_matches(double a, double b) {
  return std::abs(a - b) <= kSpacingRelTol * std::max(a, b);
}

}  // namespace

double GridFunction::eval(double xq) const {
  const double t = (xq - x0) / h;
  if (t <= 0.0) return ff_left;
  const double last = static_cast<double>(v.size()) - 1.0;
  if (t >= last) return ff_right;
  const auto i = static_cast<std::size_t>(t);
  const double frac = t - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

double GridFunction::eval_cubic(double xq) const {
  const double t = (xq - x0) / h;
  if (t <= 0.0) return ff_left;
  const double last = static_cast<double>(v.size()) - 1.0;
  if (t >= last) return ff_right;
  const auto i = static_cast<long>(t);
  const double s = t - static_cast<double>(i);
  if (i < 1 || i + 2 >= static_cast<long>(v.size())) {
    // fall back to linear in the outermost cells
    const double frac = s;
    return v[i] + frac * (v[i + 1] - v[i]);
  }
  const double ym1 = v[i - 1], y0 = v[i], y1 = v[i + 1], y2 = v[i + 2];
  // Lagrange cubic through the four surrounding nodes.
  const double a = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double b = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double c = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double d = (s + 1.0) * s * (s - 1.0) / 6.0;
  return a * ym1 + b * y0 + c * y1 + d * y2;
}

double GridFunction::min_value() const {
  return *std::min_element(v.begin(), v.end());
}

double GridFunction::max_value() const {
  return *std::max_element(v.begin(), v.end());
}

GridFunction make_grid_function(double a, double b, double h, double ff_left, double ff_right) {
  if (!(h > 0.0) || !(b > a)) throw ValidationError("make_grid_function: bad window");
  GridFunction u;
  u.x0 = a;
  u.h = h;
  u.ff_left = ff_left;
  u.ff_right = ff_right;
  const auto n = static_cast<std::size_t>(std::llround((b - a) / h)) + 1;
  u.v.assign(n, 0.0);
  return u;
}

GridFunction derivative(const GridFunction& u) {
  GridFunction d = u;
  const std::size_t n = u.size();
  if (n < 3) throw GridError("derivative needs at least 3 nodes");
  d.v[0] = (u.v[1] - u.v[0]) / u.h;
  for (std::size_t i = 1; i + 1 < n; ++i) d.v[i] = (u.v[i + 1] - u.v[i - 1]) / (2.0 * u.h);
  d.v[n - 1] = (u.v[n - 1] - u.v[n - 2]) / u.h;
  d.ff_left = 0.0;
  d.ff_right = 0.0;
  return d;
}

GridFunction shift_cells(const GridFunction& u, long cells) {
  GridFunction out = u;
  const long n = static_cast<long>(u.size());
  for (long i = 0; i < n; ++i) out.v[i] = u.at_extended(i + cells);
  return out;
}

GridFunction reflect(const GridFunction& u) {
  GridFunction out = u;
  out.x0 = -u.x_back();
  std::reverse(out.v.begin(), out.v.end());
  out.ff_left = u.ff_right;
  out.ff_right = u.ff_left;
  return out;
}

GridFunction resample(const GridFunction& u, double a, double b, double h) {
  GridFunction out = make_grid_function(a, b, h, u.ff_left, u.ff_right);
  for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = u.eval(out.x(i));
  return out;
}

GridFunction convolve(const SampledKernel& k, const GridFunction& u) {
  if (!spacing_matches(k.h, u.h)) {
    throw GridError("convolve: kernel sampled at h=" + std::to_string(k.h) +
                    " but grid spacing is " + std::to_string(u.h));
  }
  GridFunction out = u;
  const long n = static_cast<long>(u.size());
  const long m = static_cast<long>(k.w.size());
  const double total = k.cdf.back();

  const double* w = k.w.data();
  const double* uv = u.v.data();
  for (long i = 0; i < n; ++i) {
    // u index for weight t is i - (j_lo + t); clip to the window and account
    // for the far fields through the kernel CDF.
    const long bi = i - k.j_lo;
    const long t_hi = std::min(m - 1, bi);            // largest t with index >= 0
    const long t_lo = std::max(0L, bi - (n - 1));     // smallest t with index < n
    double acc = 0.0;
    if (t_lo > 0) {
      // weights 0..t_lo-1 reach beyond the right window edge
      acc += u.ff_right * k.cdf[t_lo - 1];
    }
    if (t_hi < m - 1) {
      acc += u.ff_left * (t_hi < 0 ? total : total - k.cdf[t_hi]);
    }
    double s = 0.0;
    for (long t = t_lo; t <= t_hi; ++t) s += w[t] * uv[bi - t];
    out.v[i] = acc + k.h * s;
  }
  return out;
}

GridFunction apply_operator(const SampledKernel& k, const IgnitionNonlinearity& nl,
                            const GridFunction& u) {
  GridFunction out = convolve(k, u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.v[i] = out.v[i] - u.v[i] + nl.f(u.v[i]);
  }
  out.ff_left = nl.f(u.ff_left);
  out.ff_right = nl.f(u.ff_right);
  return out;
}

double level_crossing(const GridFunction& u, double level) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (u.v[i] == level) return u.x(i);
    if (i + 1 < n) {
      const double d0 = u.v[i] - level;
      const double d1 = u.v[i + 1] - level;
      if (d0 * d1 < 0.0) {
        return u.x(i) + u.h * d0 / (d0 - d1);
      }
    }
  }
  throw DiagnosticError("level_crossing: profile does not attain level " + std::to_string(level));
}

void write_csv(const GridFunction& u, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.precision(17);
  os << "x,u\n";
  for (std::size_t i = 0; i < u.size(); ++i) os << u.x(i) << "," << u.v[i] << "\n";
}

void write_binary(const GridFunction& u, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  const std::uint64_t n = u.size();
  os.write(reinterpret_cast<const char*>(&u.x0), sizeof(double));
  os.write(reinterpret_cast<const char*>(&u.h), sizeof(double));
  os.write(reinterpret_cast<const char*>(&n), sizeof(n));
  os.write(reinterpret_cast<const char*>(&u.ff_left), sizeof(double));
  os.write(reinterpret_cast<const char*>(&u.ff_right), sizeof(double));
  os.write(reinterpret_cast<const char*>(u.v.data()),
           static_cast<std::streamsize>(n * sizeof(double)));
}

GridFunction read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  GridFunction u;
  std::uint64_t n = 0;
  is.read(reinterpret_cast<char*>(&u.x0), sizeof(double));
  is.read(reinterpret_cast<char*>(&u.h), sizeof(double));
  is.read(reinterpret_cast<char*>(&n), sizeof(n));
  is.read(reinterpret_cast<char*>(&u.ff_left), sizeof(double));
  is.read(reinterpret_cast<char*>(&u.ff_right), sizeof(double));
  u.v.resize(n);
  is.read(reinterpret_cast<char*>(u.v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw Error("truncated checkpoint file " + path);
  return u;
}

}  // namespace nlf
