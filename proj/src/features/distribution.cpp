#include <algorithm>

#include "internal.hpp"

namespace tscanon {
namespace detail {

double histogram_mode(Prepared& p, std::size_t n_bins) {
  const Histogram h = histogram(p.z(), n_bins);
  const std::size_t top = *std::max_element(h.counts.begin(), h.counts.end());
  // Ties resolve to the mean of the tied bin centres.
  double sum = 0.0;
  std::size_t ties = 0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (h.counts[b] == top) {
      sum += h.center(b);
      ++ties;
    }
  }
  return sum / static_cast<double>(ties);
}

}  // namespace detail

double histogram_mode(const TimeSeries& series, std::size_t n_bins) {
  if (n_bins == 0) raise(ErrorKind::InvalidArgument, "histogram_mode needs at least one bin");
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::histogram_mode(p, n_bins);
}

}  // namespace tscanon
