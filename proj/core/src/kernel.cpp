#include "nlf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nlf/errors.hpp"
#include "nlf/numerics.hpp"

namespace nlf {

namespace {

bool is_finite_interval(const KernelPiece& p) {
  return std::isfinite(p.lo) && std::isfinite(p.hi);
}

double horner(const std::vector<double>& c, double x) {
  double y = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * x + *it;
  return y;
}

// Decay rate of the density toward +inf / -inf; kInf when the support is
// bounded on that side or the piece is gaussian.
double tail_rate_right(const KernelSpec& spec) {
  double rate = kInf;
  for (const auto& p : spec.pieces) {
    if (std::isfinite(p.hi)) continue;
    if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
      rate = std::min(rate, -e->b);
    }
    // GaussianForm decays faster than any exponential.
  }
  return rate;
}

double tail_rate_left(const KernelSpec& spec) {
  double rate = kInf;
  for (const auto& p : spec.pieces) {
    if (std::isfinite(p.lo)) continue;
    if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
      rate = std::min(rate, e->b);
    }
  }
  return rate;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// integral over [lo, inf) of x^k exp(g x) dx with g < 0.
double poly_exp_integral_right(double lo, int k, double g) {
  const double lam = -g;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    sum += binom(k, j) * std::pow(lo, k - j) * factorial(j) / std::pow(lam, j + 1);
  }
  return std::exp(g * lo) * sum;
}

// integral over (-inf, hi] of x^k exp(g x) dx with g > 0.
double poly_exp_integral_left(double hi, int k, double g) {
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += sign * binom(k, j) * std::pow(hi, k - j) * factorial(j) / std::pow(g, j + 1);
    sign = -sign;
  }
  return std::exp(g * hi) * sum;
}

double piece_weighted_integral(const KernelPiece& p, int k, double s, double tol) {
  const auto integrand = [&](double x) {
    const double j = piece_eval(p, x);
    if (j < -1e-12) throw ValidationError("kernel density negative at x=" + std::to_string(x));
    return j * std::pow(x, k) * std::exp(s * x);
  };

  if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
    const double g = e->b + s;
    const double pref = e->a * std::exp(-e->b * e->x0);
    if (e->a < 0.0) throw ValidationError("exponential piece with negative prefactor");
    if (!std::isfinite(p.hi)) {
      if (g >= 0.0) throw DivergenceError("integral diverges at +inf (rate " +
                                          std::to_string(-e->b) + ")");
      return pref * poly_exp_integral_right(p.lo, k, g);
    }
    if (!std::isfinite(p.lo)) {
      if (g <= 0.0) throw DivergenceError("integral diverges at -inf (rate " +
                                          std::to_string(e->b) + ")");
      return pref * poly_exp_integral_left(p.hi, k, g);
    }
    return adaptive_simpson(integrand, p.lo, p.hi, tol);
  }

  if (const auto* gsn = std::get_if<GaussianForm>(&p.form)) {
    // The weighted integrand peaks near mean + s*sd^2 and is negligible
    // beyond ~16 standard deviations from there.
    const double center = gsn->mean + s * gsn->sd * gsn->sd;
    const double cut = 16.0 * gsn->sd + 4.0 * gsn->sd * k;
    const double a = std::max(p.lo, center - cut);
    const double b = std::min(p.hi, center + cut);
    if (!(b > a)) return 0.0;
    return adaptive_simpson(integrand, a, b, tol);
  }

  if (!is_finite_interval(p)) {
    throw DivergenceError("non-integrable piece: polynomial/top-hat on an infinite interval");
  }
  return adaptive_simpson(integrand, p.lo, p.hi, tol);
}

}  // namespace

double piece_eval(const KernelPiece& piece, double x) {
  if (const auto* e = std::get_if<ExpTailForm>(&piece.form)) {
    return e->a * std::exp(e->b * (x - e->x0));
  }
  if (const auto* poly = std::get_if<PolyForm>(&piece.form)) {
    return horner(poly->coeffs, x);
  }
  if (const auto* g = std::get_if<GaussianForm>(&piece.form)) {
    const double z = (x - g->mean) / g->sd;
    return g->amplitude * std::exp(-0.5 * z * z);
  }
  return std::get<TopHatForm>(piece.form).height;
}

double kernel_eval(const KernelSpec& spec, double x) {
  for (const auto& p : spec.pieces) {
    if (x >= p.lo && x <= p.hi) return piece_eval(p, x);
  }
  return 0.0;
}

KernelSpec make_kernel(std::string name, std::vector<KernelPiece> pieces) {
  if (pieces.empty()) throw ValidationError("kernel needs at least one piece");
  KernelSpec spec;
  spec.name = std::move(name);
  spec.pieces = std::move(pieces);
  for (const auto& p : spec.pieces) {
    if (!(p.lo < p.hi)) throw ValidationError("kernel piece with empty interval");
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi)) {
      const bool ok = std::holds_alternative<ExpTailForm>(p.form) ||
                      std::holds_alternative<GaussianForm>(p.form);
      if (!ok) {
        throw ValidationError("semi-infinite piece must be an exponential tail or gaussian");
      }
      if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
        if (!std::isfinite(p.hi) && e->b >= 0.0) {
          throw ValidationError("right tail piece must decay (b < 0)");
        }
        if (!std::isfinite(p.lo) && e->b <= 0.0) {
          throw ValidationError("left tail piece must decay (b > 0)");
        }
      }
    }
  }
  double lo = kInf, hi = -kInf;
  for (const auto& p : spec.pieces) {
    lo = std::min(lo, p.lo);
    hi = std::max(hi, p.hi);
  }
  spec.support_hint = {lo, hi};
  spec.lambda_window = {0.0, std::min(tail_rate_right(spec), tail_rate_left(spec))};
  return spec;
}

KernelSpec example21_kernel() {
  std::vector<KernelPiece> pieces;
  pieces.push_back({2.0, kInf, ExpTailForm{2.0 / 15.0, -1.0, 2.0}});
  pieces.push_back({-kInf, -1.0, ExpTailForm{8.0 / 15.0, 2.0, -1.0}});
  pieces.push_back({-1.0, 2.0, PolyForm{{2.0 / 9.0, -2.0 / 9.0, 4.0 / 45.0}}});
  return make_kernel("paper-example-2.1", std::move(pieces));
}

KernelSpec gaussian_kernel(double mean, double sd) {
  if (!(sd > 0.0)) throw ValidationError("gaussian kernel needs sd > 0");
  const double amp = 1.0 / (sd * std::sqrt(2.0 * M_PI));
  std::vector<KernelPiece> pieces;
  pieces.push_back({-kInf, kInf, GaussianForm{mean, sd, amp}});
  return make_kernel("gaussian", std::move(pieces));
}

KernelSpec tophat_kernel(double center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("top-hat kernel needs radius > 0");
  std::vector<KernelPiece> pieces;
  pieces.push_back({center - radius, center + radius, TopHatForm{0.5 / radius}});
  return make_kernel("tophat", std::move(pieces));
}

double kernel_weighted_integral(const KernelSpec& spec, int k, double s, double tol) {
  if (!(tol > 0.0)) throw ValidationError("quadrature tol must be > 0");
  const double piece_tol = tol / static_cast<double>(spec.pieces.size());
  double total = 0.0;
  for (const auto& p : spec.pieces) total += piece_weighted_integral(p, k, s, piece_tol);
  return total;
}

double kernel_mass(const KernelSpec& spec, double tol) {
  return kernel_weighted_integral(spec, 0, 0.0, tol);
}

std::vector<double> kernel_piece_masses(const KernelSpec& spec, double tol) {
  std::vector<double> masses;
  masses.reserve(spec.pieces.size());
  const double piece_tol = tol / static_cast<double>(spec.pieces.size());
  for (const auto& p : spec.pieces) {
    masses.push_back(piece_weighted_integral(p, 0, 0.0, piece_tol));
  }
  return masses;
}

double kernel_moment(const KernelSpec& spec, int k, double tol) {
  if (k != 1 && k != 2) throw ValidationError("kernel_moment supports k in {1, 2}");
  return kernel_weighted_integral(spec, k, 0.0, tol);
}

std::pair<double, double> mgf_window(const KernelSpec& spec) {
  // exp(-mu y) against the right tail needs mu > -rate_right, against the
  // left tail mu < rate_left.
  return {-tail_rate_right(spec), tail_rate_left(spec)};
}

double kernel_mgf(const KernelSpec& spec, double mu) {
  const auto [lo, hi] = mgf_window(spec);
  if (!(mu > lo && mu < hi)) {
    std::ostringstream os;
    os << "mgf argument " << mu << " outside analyticity window (" << lo << ", " << hi << ")";
    throw DivergenceError(os.str());
  }
  return kernel_weighted_integral(spec, 0, -mu, kQuadTol);
}

double kernel_mgf_derivative(const KernelSpec& spec, double mu) {
  const auto [lo, hi] = mgf_window(spec);
  if (!(mu > lo && mu < hi)) throw DivergenceError("mgf derivative outside analyticity window");
  return -kernel_weighted_integral(spec, 1, -mu, kQuadTol);
}

KernelSpec kernel_reflect(const KernelSpec& spec) {
  std::vector<KernelPiece> pieces;
  pieces.reserve(spec.pieces.size());
  for (const auto& p : spec.pieces) {
    KernelPiece q;
    q.lo = -p.hi;
    q.hi = -p.lo;
    if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
      q.form = ExpTailForm{e->a, -e->b, -e->x0};
    } else if (const auto* poly = std::get_if<PolyForm>(&p.form)) {
      PolyForm r = *poly;
      for (std::size_t j = 1; j < r.coeffs.size(); j += 2) r.coeffs[j] = -r.coeffs[j];
      q.form = std::move(r);
    } else if (const auto* g = std::get_if<GaussianForm>(&p.form)) {
      q.form = GaussianForm{-g->mean, g->sd, g->amplitude};
    } else {
      q.form = p.form;
    }
    pieces.push_back(std::move(q));
  }
  return make_kernel(spec.name + "-reflected", std::move(pieces));
}

KernelSpec kernel_shift(const KernelSpec& spec, double shift) {
  std::vector<KernelPiece> pieces;
  pieces.reserve(spec.pieces.size());
  for (const auto& p : spec.pieces) {
    KernelPiece q;
    q.lo = p.lo + shift;
    q.hi = p.hi + shift;
    if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
      q.form = ExpTailForm{e->a, e->b, e->x0 + shift};
    } else if (const auto* poly = std::get_if<PolyForm>(&p.form)) {
      // p(x - shift) via binomial re-expansion.
      const auto& c = poly->coeffs;
      std::vector<double> out(c.size(), 0.0);
      for (std::size_t nidx = 0; nidx < c.size(); ++nidx) {
        for (std::size_t j = 0; j <= nidx; ++j) {
          out[j] += c[nidx] * binom(static_cast<int>(nidx), static_cast<int>(j)) *
                    std::pow(-shift, static_cast<double>(nidx - j));
        }
      }
      q.form = PolyForm{std::move(out)};
    } else if (const auto* g = std::get_if<GaussianForm>(&p.form)) {
      q.form = GaussianForm{g->mean + shift, g->sd, g->amplitude};
    } else {
      q.form = p.form;
    }
    pieces.push_back(std::move(q));
  }
  std::ostringstream os;
  os << spec.name << "-shift" << shift;
  return make_kernel(os.str(), std::move(pieces));
}

bool kernel_compact_support(const KernelSpec& spec) {
  return std::isfinite(spec.support_hint.first) && std::isfinite(spec.support_hint.second);
}

std::pair<double, double> kernel_truncation_bounds(const KernelSpec& spec, double rel_thr) {
  // Peak density is attained at a finite piece endpoint, a gaussian mean, or
  // inside a finite piece; scan those.
  double peak = 0.0;
  for (const auto& p : spec.pieces) {
    if (const auto* g = std::get_if<GaussianForm>(&p.form)) {
      if (g->mean >= p.lo && g->mean <= p.hi) peak = std::max(peak, g->amplitude);
    }
    if (std::isfinite(p.lo)) peak = std::max(peak, piece_eval(p, p.lo));
    if (std::isfinite(p.hi)) peak = std::max(peak, piece_eval(p, p.hi));
    if (is_finite_interval(p)) {
      for (int i = 0; i <= 400; ++i) {
        peak = std::max(peak, piece_eval(p, p.lo + (p.hi - p.lo) * i / 400.0));
      }
    }
  }
  if (!(peak > 0.0)) throw ValidationError("kernel density is identically zero");
  const double thr = rel_thr * peak;

  double right = -kInf, left = kInf;
  for (const auto& p : spec.pieces) {
    double piece_right = p.hi;
    double piece_left = p.lo;
    if (!std::isfinite(p.hi)) {
      if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
        piece_right = (e->a <= thr) ? p.lo : e->x0 + std::log(thr / e->a) / e->b;
      } else if (const auto* g = std::get_if<GaussianForm>(&p.form)) {
        piece_right = g->mean + g->sd * std::sqrt(std::max(0.0, 2.0 * std::log(g->amplitude / thr)));
      }
    }
    if (!std::isfinite(p.lo)) {
      if (const auto* e = std::get_if<ExpTailForm>(&p.form)) {
        piece_left = (e->a <= thr) ? p.hi : e->x0 + std::log(thr / e->a) / e->b;
      } else if (const auto* g = std::get_if<GaussianForm>(&p.form)) {
        piece_left = g->mean - g->sd * std::sqrt(std::max(0.0, 2.0 * std::log(g->amplitude / thr)));
      }
    }
    right = std::max(right, piece_right);
    left = std::min(left, piece_left);
  }
  return {left, right};
}

KernelReport kernel_check(const KernelSpec& spec, double tol) {
  if (!(tol > 0.0)) throw ValidationError("kernel_check: tol must be > 0");
  KernelReport rep;
  rep.mass = kernel_mass(spec, std::min(tol, kQuadTol));
  if (std::abs(rep.mass - 1.0) > tol) {
    std::ostringstream os;
    os << "kernel mass " << rep.mass << " deviates from 1 beyond tol " << tol;
    throw ValidationError(os.str());
  }
  rep.m1 = kernel_moment(spec, 1, kQuadTol);
  rep.m2 = kernel_moment(spec, 2, kQuadTol);
  rep.lambda_window = spec.lambda_window;

  // (J2) witnesses: a fixed 1e4-point scan over the truncated support, one
  // point on each side of the origin with strictly positive density.
  const auto [lo, hi] = kernel_truncation_bounds(spec, kSampleTruncation);
  const int n_scan = 10000;
  double best_a = 0.0, best_a_val = 0.0, best_b = 0.0, best_b_val = 0.0;
  for (int i = 0; i <= n_scan; ++i) {
    const double x = lo + (hi - lo) * i / n_scan;
    const double j = kernel_eval(spec, x);
    if (x <= 0.0 && j > best_a_val) {
      best_a_val = j;
      best_a = x;
    }
    if (x >= 0.0 && j > best_b_val) {
      best_b_val = j;
      best_b = x;
    }
  }
  if (!(best_a_val > 0.0) || !(best_b_val > 0.0) || best_a == best_b) {
    throw ValidationError("no (J2) witness pair a <= 0 <= b with positive density found");
  }
  rep.j2_witness_a = best_a;
  rep.j2_witness_b = best_b;

  // K1: maximize the quotient eta -> integral |J(.+eta) - J| / eta over a
  // decreasing eta grid; the quotient increases toward the total variation.
  double k1 = 0.0;
  for (const double eta : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const double step = std::min(eta / 8.0, 0.01);
    const double a = lo - eta - 1.0, b = hi + 1.0;
    const long n = static_cast<long>(std::ceil((b - a) / step));
    double integral = 0.0;
    double prev = std::abs(kernel_eval(spec, a + eta) - kernel_eval(spec, a));
    for (long i = 1; i <= n; ++i) {
      const double x = a + (b - a) * i / n;
      const double cur = std::abs(kernel_eval(spec, x + eta) - kernel_eval(spec, x));
      integral += 0.5 * (prev + cur) * (b - a) / n;
      prev = cur;
    }
    k1 = std::max(k1, integral / eta);
  }
  rep.lipschitz_K1 = k1;
  return rep;
}

SampledKernel sample_kernel(const KernelSpec& spec, double h) {
  if (!(h > 0.0)) throw ValidationError("sample_kernel: h must be > 0");
  const auto [lo, hi] = kernel_truncation_bounds(spec, kSampleTruncation);
  SampledKernel sk;
  sk.h = h;
  sk.j_lo = static_cast<long>(std::floor(lo / h));
  sk.j_hi = static_cast<long>(std::ceil(hi / h));
  sk.w.resize(sk.j_hi - sk.j_lo + 1);
  double sum = 0.0;
  for (long j = sk.j_lo; j <= sk.j_hi; ++j) {
    const double v = kernel_eval(spec, j * h);
    if (v < -1e-12) throw ValidationError("negative density sample while discretizing kernel");
    sk.w[j - sk.j_lo] = std::max(v, 0.0);
    sum += sk.w[j - sk.j_lo];
  }
  if (!(sum > 0.0)) throw ValidationError("sampled kernel has zero mass");
  // Renormalize so the discrete mass is exactly 1: constant states must be
  // exact fixed points of J*u - u.
  const double scale = 1.0 / (h * sum);
  for (auto& v : sk.w) v *= scale;

  sk.cdf.resize(sk.w.size());
  double acc = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < sk.w.size(); ++i) {
    acc += h * sk.w[i];
    sk.cdf[i] = acc;
    const double y = (sk.j_lo + static_cast<long>(i)) * h;
    m1 += h * sk.w[i] * y;
    m2 += h * sk.w[i] * y * y;
  }
  sk.mean = m1;
  sk.stddev = std::sqrt(std::max(0.0, m2 - m1 * m1));
  return sk;
}

KernelSpec kernel_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  KernelSpec spec;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "paper-example-2.1") {
      spec = example21_kernel();
    } else {
      throw ValidationError("unknown kernel preset: " + preset);
    }
  } else if (j.contains("family")) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "gaussian") {
      spec = gaussian_kernel(j.value("mean", 0.0), j.value("sd", 1.0));
    } else if (family == "tophat") {
      spec = tophat_kernel(j.value("center", 0.0), j.at("radius").get<double>());
    } else {
      throw ValidationError("unknown kernel family: " + family);
    }
  } else if (j.contains("pieces")) {
    std::vector<KernelPiece> pieces;
    for (const auto& pj : j.at("pieces")) {
      KernelPiece p;
      p.lo = pj.contains("lo") ? pj.at("lo").get<double>() : -kInf;
      p.hi = pj.contains("hi") ? pj.at("hi").get<double>() : kInf;
      const std::string form = pj.at("form").get<std::string>();
      if (form == "exp-tail") {
        p.form = ExpTailForm{pj.at("a").get<double>(), pj.at("b").get<double>(),
                             pj.value("x0", 0.0)};
      } else if (form == "poly") {
        p.form = PolyForm{pj.at("coeffs").get<std::vector<double>>()};
      } else if (form == "gaussian") {
        p.form = GaussianForm{pj.value("mean", 0.0), pj.at("sd").get<double>(),
                              pj.at("amplitude").get<double>()};
      } else if (form == "tophat") {
        p.form = TopHatForm{pj.at("height").get<double>()};
      } else {
        throw ValidationError("unknown kernel piece form: " + form);
      }
      pieces.push_back(std::move(p));
    }
    spec = make_kernel(j.value("name", std::string("custom")), std::move(pieces));
  } else {
    throw ValidationError("kernel config needs one of: preset, family, pieces");
  }
  if (j.contains("shift")) spec = kernel_shift(spec, j.at("shift").get<double>());
  return spec;
}

}  // namespace nlf
