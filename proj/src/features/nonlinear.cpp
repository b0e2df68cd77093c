#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace tscanon {
namespace detail {

double trev_num(Prepared& p) {
  const auto z = p.z();
  double sum = 0.0;
  for (std::size_t t = 0; t + 1 < z.size(); ++t) {
    const double d = z[t + 1] - z[t];
    sum += d * d * d;
  }
  return sum / static_cast<double>(z.size() - 1);
}

double histogram_ami(Prepared& p, std::size_t lag, std::size_t n_bins) {
  const auto z = p.z();
  if (lag == 0 || n_bins == 0) raise(ErrorKind::InvalidArgument, "lag and bin count must be positive");
  if (z.size() < lag + 2) raise(ErrorKind::DegenerateInput, "series too short for the requested lag");

  const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
  const double lo = *mn;
  const double width = (*mx - lo) / static_cast<double>(n_bins);
  const std::size_t pairs = z.size() - lag;

  std::vector<double> joint(n_bins * n_bins, 0.0);
  for (std::size_t t = 0; t < pairs; ++t) {
    const std::size_t a = bin_index(z[t], lo, width, n_bins);
    const std::size_t b = bin_index(z[t + lag], lo, width, n_bins);
    joint[a * n_bins + b] += 1.0;
  }
  std::vector<double> row(n_bins, 0.0);
  std::vector<double> col(n_bins, 0.0);
  for (std::size_t a = 0; a < n_bins; ++a) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      row[a] += joint[a * n_bins + b];
      col[b] += joint[a * n_bins + b];
    }
  }
  const double total = static_cast<double>(pairs);
  double mi = 0.0;
  for (std::size_t a = 0; a < n_bins; ++a) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double c = joint[a * n_bins + b];
      if (c > 0.0) mi += (c / total) * std::log(c * total / (row[a] * col[b]));
    }
  }
  // Plug-in MI is non-negative; clip rounding residue.
  return std::max(mi, 0.0);
}

double ami_gaussian_first_min(Prepared& p, std::size_t max_lag) {
  const Acf& acf = p.acf();
  const std::size_t m = std::min(max_lag, acf.max_lag());
  if (m < 1) raise(ErrorKind::DegenerateInput, "no lags available");
  std::vector<double> ami(m + 1, 0.0);
  for (std::size_t lag = 1; lag <= m; ++lag) ami[lag] = -0.5 * std::log(1.0 - acf[lag] * acf[lag]);
  for (std::size_t lag = 2; lag < m; ++lag) {
    if (ami[lag] < ami[lag - 1] && ami[lag] < ami[lag + 1]) return static_cast<double>(lag);
  }
  return static_cast<double>(m);
}

}  // namespace detail

double trev_num(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::trev_num(p);
}

double histogram_ami(const TimeSeries& series, std::size_t lag, std::size_t n_bins) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::histogram_ami(p, lag, n_bins);
}

double ami_gaussian_first_min(const TimeSeries& series, std::size_t max_lag) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::ami_gaussian_first_min(p, max_lag);
}

}  // namespace tscanon
