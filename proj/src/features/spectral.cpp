#include <numbers>

#include "internal.hpp"

namespace tscanon {
namespace detail {

double spectral_area_5_1(Prepared& p) {
  const WelchSpectrum s = welch_psd(p.z());
  const double cutoff = std::numbers::pi / 5.0;
  double low = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < s.power.size(); ++k) {
    total += s.power[k];
    if (s.frequencies[k] < cutoff) low += s.power[k];
  }
  if (!(total > 0.0)) raise(ErrorKind::DegenerateInput, "spectrum has no power");
  return low / total;
}

double spectral_centroid(Prepared& p) {
  const WelchSpectrum s = welch_psd(p.z());
  double total = 0.0;
  for (double v : s.power) total += v;
  if (!(total > 0.0)) raise(ErrorKind::DegenerateInput, "spectrum has no power");
  const double half = 0.5 * total;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < s.power.size(); ++k) {
    cumulative += s.power[k];
    if (cumulative >= half) return s.frequencies[k];
  }
  return s.frequencies.back();
}

}  // namespace detail

double spectral_area_5_1(const TimeSeries& series) {
  detail::require_length(series.length(), kMinSpectrumLength);
  detail::Prepared p(series.samples());
  return detail::spectral_area_5_1(p);
}

double spectral_centroid(const TimeSeries& series) {
  detail::require_length(series.length(), kMinSpectrumLength);
  detail::Prepared p(series.samples());
  return detail::spectral_centroid(p);
}

}  // namespace tscanon
