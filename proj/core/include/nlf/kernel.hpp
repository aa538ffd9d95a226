#pragma once

#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default absolute tolerance handed to the adaptive quadrature when an
// operation does not take one explicitly. kernel_mass(spec, kQuadTol) and
// kernel_mgf(spec, 0.0) run the exact same code path, so they agree bitwise.
inline constexpr double kQuadTol = 1e-11;

// Relative density threshold below which a sampled kernel is truncated.
inline constexpr double kSampleTruncation = 1e-14;

// ---------------------------------------------------------------------------
// Piece forms. A dispersal density is a finite list of closed-form pieces on
// intervals that partition the support; semi-infinite intervals must carry a
// form with an exponential (or faster) tail.

struct ExpTailForm {
  double a = 1.0;   // prefactor, must be >= 0
  double b = -1.0;  // rate: a * exp(b * (x - x0))
  double x0 = 0.0;
};

struct PolyForm {
  std::vector<double> coeffs;  // c0 + c1 x + c2 x^2 + ...
};

struct GaussianForm {
  double mean = 0.0;
  double sd = 1.0;
  double amplitude = 1.0;
};

struct TopHatForm {
  double height = 1.0;
};

using PieceForm = std::variant<ExpTailForm, PolyForm, GaussianForm, TopHatForm>;

struct KernelPiece {
  double lo = -kInf;
  double hi = kInf;
  PieceForm form;
};

struct KernelSpec {
  std::string name;
  std::vector<KernelPiece> pieces;
  // Open interval of lambda with finite integral of J(x) exp(lambda |x|);
  // derived from the tail rates at construction.
  std::pair<double, double> lambda_window{0.0, kInf};
  // Declared support bounds for quadrature truncation (may be infinite).
  std::pair<double, double> support_hint{-kInf, kInf};
};

struct KernelReport {
  double mass = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  std::pair<double, double> lambda_window{0.0, kInf};
  double j2_witness_a = 0.0;  // a <= 0 with J(a) > 0
  double j2_witness_b = 0.0;  // b >= 0 with J(b) > 0
  double lipschitz_K1 = 0.0;  // sup_eta of integral |J(.+eta)-J| / eta
};

// Kernel discretized for grid convolution: offsets y_j = j*h for
// j in [j_lo, j_hi], weights renormalized so that h * sum(w) == 1 exactly.
struct SampledKernel {
  double h = 0.0;
  long j_lo = 0;
  long j_hi = 0;
  std::vector<double> w;
  std::vector<double> cdf;  // cdf[i] = h * (w[0] + ... + w[i])
  double mean = 0.0;
  double stddev = 0.0;

  double radius_left() const { return -static_cast<double>(j_lo) * h; }
  double radius_right() const { return static_cast<double>(j_hi) * h; }
};

// ---------------------------------------------------------------------------
// Construction

KernelSpec make_kernel(std::string name, std::vector<KernelPiece> pieces);

// The built-in asymmetric example: exponential tails 2/15 e^{-(x-2)} on
// [2,inf) and 8/15 e^{2(x+1)} on (-inf,-1], quadratic bridge in between.
KernelSpec example21_kernel();
KernelSpec gaussian_kernel(double mean, double sd);
KernelSpec tophat_kernel(double center, double radius);

// Parse {"preset": ...} | {"family": ..., params} | {"pieces": [...]}, each
// with an optional "shift". Accepts a JSON object as text.
KernelSpec kernel_from_json(const std::string& json_text);

// ---------------------------------------------------------------------------
// Operations

double kernel_eval(const KernelSpec& spec, double x);
double piece_eval(const KernelPiece& piece, double x);

// integral of J(x) x^k exp(s x); adaptive quadrature on finite pieces,
// closed forms on exponential tails.
double kernel_weighted_integral(const KernelSpec& spec, int k, double s, double tol);

double kernel_mass(const KernelSpec& spec, double tol);
std::vector<double> kernel_piece_masses(const KernelSpec& spec, double tol);
double kernel_moment(const KernelSpec& spec, int k, double tol);

// integral of J(y) exp(-mu y); throws DivergenceError outside the open
// analyticity window reported by mgf_window.
double kernel_mgf(const KernelSpec& spec, double mu);
std::pair<double, double> mgf_window(const KernelSpec& spec);

// d/dmu of kernel_mgf: -integral of J(y) y exp(-mu y).
double kernel_mgf_derivative(const KernelSpec& spec, double mu);

KernelSpec kernel_reflect(const KernelSpec& spec);
KernelSpec kernel_shift(const KernelSpec& spec, double shift);

bool kernel_compact_support(const KernelSpec& spec);

KernelReport kernel_check(const KernelSpec& spec, double tol);

// Finite interval outside of which the density is below rel_thr * max(J).
std::pair<double, double> kernel_truncation_bounds(const KernelSpec& spec, double rel_thr);

SampledKernel sample_kernel(const KernelSpec& spec, double h);

}  // namespace nlf
