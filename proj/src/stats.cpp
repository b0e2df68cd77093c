#include "tscanon/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fft.hpp"

namespace tscanon {

namespace {

struct Centered {
  std::vector<double> values;
  double sum_sq;
};

Centered center_checked(std::span<const double> x) {
  if (x.size() < 2) raise(ErrorKind::DegenerateInput, "autocorrelation needs at least 2 samples");
  const double m = mean(x);
  Centered c{std::vector<double>(x.size()), 0.0};
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.values[i] = x[i] - m;
    c.sum_sq += c.values[i] * c.values[i];
    scale = std::max(scale, std::abs(x[i]));
  }
  const double rms = std::sqrt(c.sum_sq / static_cast<double>(x.size()));
  if (!(rms > 0.0) || rms <= scale * 1e-14) {
    raise(ErrorKind::DegenerateInput, "autocorrelation of a constant series");
  }
  return c;
}

void check_lag(std::span<const double> x, std::size_t max_lag) {
  if (max_lag >= x.size()) {
    raise(ErrorKind::InvalidArgument, "max_lag must be smaller than the series length");
  }
}

}  // namespace

Acf autocorr_direct(std::span<const double> x, std::size_t max_lag) {
  check_lag(x, max_lag);
  const Centered c = center_checked(x);
  const std::size_t n = x.size();
  Acf acf{std::vector<double>(max_lag + 1)};
  acf.values[0] = 1.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += c.values[t] * c.values[t + lag];
    acf.values[lag] = s / c.sum_sq;
  }
  return acf;
}

Acf autocorr_fft(std::span<const double> x, std::size_t max_lag) {
  check_lag(x, max_lag);
  const Centered c = center_checked(x);
  const std::size_t n = x.size();
  const std::size_t nfft = detail::next_pow2(n + max_lag);
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < n; ++i) buf[i] = {c.values[i], 0.0};
  detail::fft(buf, false);
  for (auto& v : buf) v = {std::norm(v), 0.0};
  detail::fft(buf, true);
  Acf acf{std::vector<double>(max_lag + 1)};
  acf.values[0] = 1.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) acf.values[lag] = buf[lag].real() / c.sum_sq;
  return acf;
}

Acf autocorr(std::span<const double> x, std::size_t max_lag) {
  return max_lag > kDirectAcfMaxLag ? autocorr_fft(x, max_lag) : autocorr_direct(x, max_lag);
}

Acf autocorr(const TimeSeries& series, std::size_t max_lag) {
  return autocorr(series.samples(), max_lag);
}

std::size_t first_zero_ac(const Acf& acf) {
  for (std::size_t lag = 1; lag <= acf.max_lag(); ++lag) {
    if (acf[lag] <= 0.0) return lag;
  }
  return acf.max_lag();
}

std::size_t first_zero_ac(std::span<const double> x) {
  if (x.size() < 3) raise(ErrorKind::DegenerateInput, "first zero crossing needs at least 3 samples");
  return first_zero_ac(autocorr(x, x.size() - 1));
}

std::size_t first_zero_ac(const TimeSeries& series) { return first_zero_ac(series.samples()); }

WelchSpectrum welch_psd(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < kMinSpectrumLength) {
    raise(ErrorKind::DegenerateInput, "spectrum needs at least 16 samples");
  }
  const Centered c = center_checked(x);
  const std::size_t nfft = detail::next_pow2(n);
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < n; ++i) buf[i] = {c.values[i], 0.0};
  detail::fft(buf, false);

  const std::size_t nout = nfft / 2 + 1;
  const double two_pi = 2.0 * std::numbers::pi;
  // |X_k|^2 / N is the two-sided density per cycle/sample; fold to one side
  // and convert to per radian.
  const double scale = 1.0 / (static_cast<double>(n) * two_pi);
  WelchSpectrum s{std::vector<double>(nout), std::vector<double>(nout)};
  for (std::size_t k = 0; k < nout; ++k) {
    s.frequencies[k] = two_pi * static_cast<double>(k) / static_cast<double>(nfft);
    double p = std::norm(buf[k]) * scale;
    if (k > 0 && k < nout - 1) p *= 2.0;
    s.power[k] = p;
  }
  return s;
}

WelchSpectrum welch_psd(const TimeSeries& series) { return welch_psd(series.samples()); }

std::size_t bin_index(double v, double lo, double width, std::size_t n_bins) noexcept {
  const double pos = (v - lo) / width;
  if (!(pos > 0.0)) return 0;
  const auto idx = static_cast<std::size_t>(pos);
  return idx >= n_bins ? n_bins - 1 : idx;
}

Histogram histogram(std::span<const double> x, std::size_t n_bins, double lo, double hi) {
  if (n_bins == 0) raise(ErrorKind::InvalidArgument, "histogram needs at least one bin");
  if (!(hi > lo)) raise(ErrorKind::DegenerateInput, "histogram range is empty");
  Histogram h;
  h.edges.resize(n_bins + 1);
  h.counts.assign(n_bins, 0);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges[n_bins] = hi;
  for (double v : x) {
    if (v < lo || v > hi) continue;
    ++h.counts[bin_index(v, lo, width, n_bins)];
  }
  return h;
}

Histogram histogram(std::span<const double> x, std::size_t n_bins) {
  if (x.empty()) raise(ErrorKind::EmptyInput, "histogram of no samples");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return histogram(x, n_bins, *mn, *mx);
}

std::vector<int> quantile_symbolize(std::span<const double> x, int n_symbols) {
  if (n_symbols < 2) raise(ErrorKind::InvalidArgument, "need at least 2 symbols");
  const auto n = x.size();
  const auto k = static_cast<std::size_t>(n_symbols);
  if (n < k) raise(ErrorKind::DegenerateInput, "fewer samples than symbols");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < n && distinct < k; ++i) {
    if (sorted[i] != sorted[i - 1]) ++distinct;
  }
  if (distinct < k) raise(ErrorKind::DegenerateInput, "fewer distinct values than symbols");

  // Type-1 quantile at p = j/k is the ceil(n*j/k)-th order statistic.
  std::vector<double> cuts(k - 1);
  for (std::size_t j = 1; j < k; ++j) cuts[j - 1] = sorted[(n * j + k - 1) / k - 1];

  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), x[i], std::less_equal<>{}) -
                              cuts.begin());
  }
  return out;
}

std::vector<int> quantile_symbolize(const TimeSeries& series, int n_symbols) {
  return quantile_symbolize(series.samples(), n_symbols);
}

LinearFit ols_linfit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) raise(ErrorKind::LengthMismatch, "xs and ys differ in length");
  if (xs.size() < 2) raise(ErrorKind::DegenerateInput, "line fit needs at least 2 points");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) raise(ErrorKind::DegenerateInput, "line fit with constant abscissa");
  LinearFit f{sxy / sxx, 0.0, 0.0};
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.slope * xs[i] + f.intercept);
    f.rss += r * r;
  }
  return f;
}

}  // namespace tscanon
