#include <cmath>
#include <numbers>

#include "internal.hpp"

namespace tscanon {
namespace detail {

double f1ecac(Prepared& p) {
  const Acf& acf = p.acf();
  const double level = 1.0 / std::numbers::e;
  for (std::size_t lag = 1; lag <= acf.max_lag(); ++lag) {
    if (acf[lag] < level) {
      const double prev = acf[lag - 1];
      return static_cast<double>(lag - 1) + (prev - level) / (prev - acf[lag]);
    }
  }
  raise(ErrorKind::NotComputable, "autocorrelation never drops below 1/e");
}

double first_min_ac(Prepared& p, std::size_t max_lag) {
  const Acf& acf = p.acf();
  if (max_lag > acf.max_lag()) max_lag = acf.max_lag();
  for (std::size_t lag = 1; lag < max_lag; ++lag) {
    if (acf[lag] < acf[lag - 1] && acf[lag] < acf[lag + 1]) return static_cast<double>(lag);
  }
  return static_cast<double>(max_lag);
}

double local_mean_forecast_stderr(Prepared& p, std::size_t window) {
  const auto z = p.z();
  if (window == 0 || z.size() < window + 2) {
    raise(ErrorKind::DegenerateInput, "too few samples for the forecast window");
  }
  std::vector<double> residuals(z.size() - window);
  const double w = static_cast<double>(window);
  for (std::size_t t = window; t < z.size(); ++t) {
    double sum = 0.0;
    for (std::size_t k = t - window; k < t; ++k) sum += z[k];
    residuals[t - window] = z[t] - sum / w;
  }
  return sample_stddev(residuals);
}

}  // namespace detail

double f1ecac(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::f1ecac(p);
}

double first_min_ac(const TimeSeries& series, std::optional<std::size_t> max_lag) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::first_min_ac(p, max_lag.value_or(series.length() - 1));
}

double local_mean_forecast_stderr(const TimeSeries& series, std::size_t window) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::local_mean_forecast_stderr(p, window);
}

}  // namespace tscanon
