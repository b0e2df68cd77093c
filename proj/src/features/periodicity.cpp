#include <array>
#include <cmath>

#include "internal.hpp"

namespace tscanon {
namespace detail {

namespace {

constexpr std::size_t kDegree = 3;
constexpr std::size_t kInteriorKnots = 3;
constexpr std::size_t kBasisCount = kDegree + 1 + kInteriorKnots;
constexpr double kPeakThreshold = 0.01;

using Basis = std::array<double, kDegree + 1>;

/// Clamped cubic B-spline on [0, right] with evenly spaced interior knots.
class CubicSplineBasis {
 public:
  explicit CubicSplineBasis(double right) {
    for (std::size_t i = 0; i <= kDegree; ++i) {
      knots_[i] = 0.0;
      knots_[kDegree + kInteriorKnots + 1 + i] = right;
    }
    for (std::size_t j = 1; j <= kInteriorKnots; ++j) {
      knots_[kDegree + j] = right * static_cast<double>(j) / static_cast<double>(kInteriorKnots + 1);
    }
  }

  /// Index of the first non-zero basis function at x; fills its 4 values.
  std::size_t evaluate(double x, Basis& out) const {
    std::size_t span = kDegree;
    while (span < kBasisCount - 1 && x >= knots_[span + 1]) ++span;

    // de Boor's triangular recurrence on the non-zero functions.
    std::array<double, kDegree + 1> left{};
    std::array<double, kDegree + 1> right{};
    out[0] = 1.0;
    for (std::size_t j = 1; j <= kDegree; ++j) {
      left[j] = x - knots_[span + 1 - j];
      right[j] = knots_[span + j] - x;
      double saved = 0.0;
      for (std::size_t r = 0; r < j; ++r) {
        const double temp = out[r] / (right[r + 1] + left[j - r]);
        out[r] = saved + right[r + 1] * temp;
        saved = left[j - r] * temp;
      }
      out[j] = saved;
    }
    return span - kDegree;
  }

 private:
  std::array<double, kBasisCount + kDegree + 1> knots_{};
};

/// Least-squares cubic spline through (t, y), t = 0..n-1.
std::vector<double> spline_trend(std::span<const double> y) {
  const std::size_t n = y.size();
  const CubicSplineBasis basis(static_cast<double>(n - 1));

  std::array<std::array<double, kBasisCount>, kBasisCount> ata{};
  std::array<double, kBasisCount> aty{};
  std::vector<Basis> values(n);
  std::vector<std::size_t> first(n);
  for (std::size_t t = 0; t < n; ++t) {
    first[t] = basis.evaluate(static_cast<double>(t), values[t]);
    for (std::size_t a = 0; a <= kDegree; ++a) {
      aty[first[t] + a] += values[t][a] * y[t];
      for (std::size_t b = 0; b <= kDegree; ++b) ata[first[t] + a][first[t] + b] += values[t][a] * values[t][b];
    }
  }

  // Cholesky factorisation of the normal equations.
  std::array<std::array<double, kBasisCount>, kBasisCount> l{};
  for (std::size_t i = 0; i < kBasisCount; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = ata[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(s > 1e-12 * ata[i][i])) raise(ErrorKind::DegenerateInput, "spline fit is not identifiable");
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  std::array<double, kBasisCount> coef{};
  for (std::size_t i = 0; i < kBasisCount; ++i) {
    double s = aty[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * coef[k];
    coef[i] = s / l[i][i];
  }
  for (std::size_t i = kBasisCount; i-- > 0;) {
    double s = coef[i];
    for (std::size_t k = i + 1; k < kBasisCount; ++k) s -= l[k][i] * coef[k];
    coef[i] = s / l[i][i];
  }

  std::vector<double> trend(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t a = 0; a <= kDegree; ++a) trend[t] += values[t][a] * coef[first[t] + a];
  }
  return trend;
}

}  // namespace

double periodicity_wang(Prepared& p) {
  const auto z = p.z();
  const std::size_t n = z.size();
  if (n <= kBasisCount) raise(ErrorKind::DegenerateInput, "too few samples for the spline trend");

  const std::vector<double> trend = spline_trend(z);
  std::vector<double> residual(n);
  double ss = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    residual[t] = z[t] - trend[t];
    ss += residual[t] * residual[t];
  }
  // Nothing but trend: the z-scored series has sum of squares n-1.
  if (ss <= 1e-20 * static_cast<double>(n - 1)) return 0.0;

  const std::size_t max_lag = n / 3;
  if (max_lag < 2) return 0.0;
  const Acf acf = autocorr(residual, max_lag);

  std::size_t trough = 0;
  for (std::size_t lag = 1; lag < max_lag; ++lag) {
    const double v = acf[lag];
    if (v < acf[lag - 1] && v < acf[lag + 1]) {
      trough = lag;
    } else if (v > acf[lag - 1] && v > acf[lag + 1] && trough > 0) {
      if (v - acf[trough] > kPeakThreshold && v > kPeakThreshold) return static_cast<double>(lag);
    }
  }
  return 0.0;
}

}  // namespace detail

double periodicity_wang(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::periodicity_wang(p);
}

}  // namespace tscanon
