#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "tscanon/stats.hpp"

namespace tscanon {

namespace {

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Lower regularized gamma by its power series; converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Upper regularized gamma by modified Lentz continued fraction; x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

}  // namespace

double log_gamma(double a) {
  if (a < 0.5) {
    // Reflection keeps the Lanczos sum in its accurate range.
    return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * a))) - log_gamma(1.0 - a);
  }
  a -= 1.0;
  double x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (a + static_cast<double>(i));
  const double t = a + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (a + 0.5) * std::log(t) - t + std::log(x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) raise(ErrorKind::InvalidArgument, "gamma_q needs a > 0");
  if (x < 0.0) raise(ErrorKind::InvalidArgument, "gamma_q needs x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double normal_sf(double z) {
  if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
  // 0.5 * erfc(z / sqrt 2), with erfc(u) = Q(1/2, u^2) for u >= 0.
  const double tail = 0.5 * gamma_q(0.5, 0.5 * z * z);
  return z >= 0.0 ? tail : 1.0 - tail;
}

double chi2_sf(double x, int dof) {
  if (dof < 1) raise(ErrorKind::InvalidArgument, "chi-square needs dof >= 1");
  if (x < 0.0) raise(ErrorKind::InvalidArgument, "chi-square needs x >= 0");
  return gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace tscanon
