#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tscanon/core.hpp"

namespace tscanon {

/// Biased autocorrelation, values[0] == 1, lags 0..max_lag.
struct Acf {
  std::vector<double> values;

  std::size_t max_lag() const noexcept { return values.size() - 1; }
  double operator[](std::size_t lag) const noexcept { return values[lag]; }
};

/// Above this many lags the ACF goes through a zero-padded FFT.
inline constexpr std::size_t kDirectAcfMaxLag = 64;

Acf autocorr(const TimeSeries& series, std::size_t max_lag);
Acf autocorr(std::span<const double> x, std::size_t max_lag);

/// Reference paths used to cross-check each other.
Acf autocorr_direct(std::span<const double> x, std::size_t max_lag);
Acf autocorr_fft(std::span<const double> x, std::size_t max_lag);

/// Smallest lag >= 1 with acf <= 0, or length-1 when the ACF never crosses.
std::size_t first_zero_ac(const TimeSeries& series);
std::size_t first_zero_ac(std::span<const double> x);
std::size_t first_zero_ac(const Acf& acf);

/// One-sided spectral density over angular frequency (rad/sample).
struct WelchSpectrum {
  std::vector<double> frequencies;
  std::vector<double> power;

  double bin_width() const noexcept { return frequencies[1] - frequencies[0]; }
};

inline constexpr std::size_t kMinSpectrumLength = 16;

/// Rectangular-window periodogram of the mean-removed series, zero padded to
/// the next power of two. Integrates to the population variance.
WelchSpectrum welch_psd(const TimeSeries& series);
WelchSpectrum welch_psd(std::span<const double> x);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;

  double bin_width() const noexcept { return edges[1] - edges[0]; }
  double center(std::size_t bin) const noexcept { return 0.5 * (edges[bin] + edges[bin + 1]); }
};

/// Equal-width bins over [lo, hi]; the top edge is closed. Samples outside
/// the range are not counted.
Histogram histogram(std::span<const double> x, std::size_t n_bins, double lo, double hi);
/// Bins spanning [min(x), max(x)].
Histogram histogram(std::span<const double> x, std::size_t n_bins);

/// Bin index of v in an equal-width layout over [lo, hi], top edge closed.
std::size_t bin_index(double v, double lo, double width, std::size_t n_bins) noexcept;

/// Equiprobable alphabet from type-1 empirical quantiles; ties go to the lower
/// symbol. DegenerateInput with fewer than n_symbols distinct values.
std::vector<int> quantile_symbolize(std::span<const double> x, int n_symbols);
std::vector<int> quantile_symbolize(const TimeSeries& series, int n_symbols);

struct LinearFit {
  double slope;
  double intercept;
  double rss;
};

LinearFit ols_linfit(std::span<const double> xs, std::span<const double> ys);

/// Upper tail of the standard normal.
double normal_sf(double z);
/// Upper tail of the chi-square distribution.
double chi2_sf(double x, int dof);
/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
double log_gamma(double a);

}  // namespace tscanon
