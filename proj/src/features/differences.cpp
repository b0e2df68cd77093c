#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace tscanon {
namespace detail {

namespace {

std::size_t ceil_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while (r * r < n) ++r;
  return r;
}

}  // namespace

double pnn40(Prepared& p) {
  const auto z = p.z();
  std::size_t above = 0;
  for (std::size_t t = 0; t + 1 < z.size(); ++t) {
    if (std::abs(z[t + 1] - z[t]) > 0.04) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(z.size() - 1);
}

double longstretch_decreasing(Prepared& p) {
  const auto z = p.z();
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t t = 0; t + 1 < z.size(); ++t) {
    run = z[t + 1] - z[t] < 0.0 ? run + 1 : 0;
    best = std::max(best, run);
  }
  return static_cast<double>(best);
}

double local_mean1_tauresrat(Prepared& p) {
  const auto z = p.z();
  std::vector<double> residuals(z.size() - 1);
  for (std::size_t t = 0; t + 1 < z.size(); ++t) residuals[t] = z[t + 1] - z[t];
  const std::size_t res_zero = first_zero_ac(std::span<const double>(residuals));
  return static_cast<double>(res_zero) / static_cast<double>(p.first_zero());
}

double embed2_dist_expfit_meandiff(Prepared& p) {
  const auto z = p.z();
  const std::size_t n = z.size();
  const std::size_t tau = std::max<std::size_t>(1, std::min(p.first_zero(), n / 10));
  if (n < tau + 3) raise(ErrorKind::DegenerateInput, "too few embedded points");

  const std::size_t nd = n - tau - 1;
  std::vector<double> d(nd);
  for (std::size_t t = 0; t < nd; ++t) {
    const double da = z[t + 1] - z[t];
    const double db = z[t + tau + 1] - z[t + tau];
    d[t] = std::sqrt(da * da + db * db);
  }
  const double scale = mean(d);
  const double dmax = *std::max_element(d.begin(), d.end());
  if (!(scale > 0.0) || !(dmax > 0.0)) raise(ErrorKind::DegenerateInput, "embedded points do not move");

  const std::size_t n_bins = ceil_sqrt(nd);
  const Histogram h = histogram(d, n_bins, 0.0, dmax);
  const double norm = 1.0 / (static_cast<double>(nd) * h.bin_width());
  double sum = 0.0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double density = static_cast<double>(h.counts[b]) * norm;
    const double fitted = std::exp(-h.center(b) / scale) / scale;
    sum += std::abs(density - fitted);
  }
  return sum / static_cast<double>(n_bins);
}

}  // namespace detail

double pnn40(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::pnn40(p);
}

double longstretch_decreasing(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::longstretch_decreasing(p);
}

double local_mean1_tauresrat(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::local_mean1_tauresrat(p);
}

double embed2_dist_expfit_meandiff(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::embed2_dist_expfit_meandiff(p);
}

}  // namespace tscanon
