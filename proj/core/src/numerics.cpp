#include "nlf/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "nlf/errors.hpp"

namespace nlf {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (!(tol > 0.0)) throw ValidationError("adaptive_simpson: tol must be > 0");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(fa, fm, fb, a, b);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                           double xtol, const std::function<double(double)>& fprime) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw ValidationError("find_root_bracketed: no sign change in bracket");
  // Bisect until the bracket is tight, then polish with Newton when possible.
  double lo = a, hi = b, flo = fa;
  for (int it = 0; it < 200 && (hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (flo * fmid < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  double x = 0.5 * (lo + hi);
  if (fprime) {
    for (int it = 0; it < 8; ++it) {
      const double fx = f(x);
      const double dfx = fprime(x);
      if (dfx == 0.0) break;
      const double xn = x - fx / dfx;
      if (xn < lo || xn > hi) break;
      if (std::abs(xn - x) < 0.25 * std::abs(x) * 1e-15 + 1e-300) {
        x = xn;
        break;
      }
      x = xn;
    }
  }
  return x;
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double xtol, int scan_points) {
  if (!(b > a)) throw ValidationError("golden_max: empty bracket");
  // Coarse scan to localize the mode.
  double best_x = a, best_f = f(a);
  for (int i = 1; i <= scan_points; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / scan_points;
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double step = (b - a) / scan_points;
  double lo = std::max(a, best_x - step);
  double hi = std::min(b, best_x + step);

  constexpr double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > xtol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (lo + hi);
  return std::max({f(xm), f1, f2, best_f});
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit_line: size mismatch");
  LinearFit out;
  out.n = x.size();
  if (out.n < 2) throw ValidationError("fit_line: need at least 2 points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < out.n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / out.n, my = sy / out.n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < out.n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ValidationError("fit_line: degenerate abscissae");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return out;
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace nlf
