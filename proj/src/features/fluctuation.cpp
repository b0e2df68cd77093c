#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace tscanon {
namespace detail {

namespace {

constexpr std::size_t kTargetScales = 50;
constexpr double kSmallestScale = 5.0;
constexpr std::size_t kMinPointsPerFit = 3;

std::vector<std::size_t> log_spaced_scales(std::size_t n) {
  const double hi = static_cast<double>(n / 2);
  if (hi < kSmallestScale) return {};
  const double lo_log = std::log(kSmallestScale);
  const double step = (std::log(hi) - lo_log) / static_cast<double>(kTargetScales - 1);
  std::vector<std::size_t> scales;
  for (std::size_t i = 0; i < kTargetScales; ++i) {
    const auto s = static_cast<std::size_t>(std::round(std::exp(lo_log + static_cast<double>(i) * step)));
    if (scales.empty() || scales.back() != s) scales.push_back(s);
  }
  return scales;
}

// Detrended fluctuation of the profile at one window size.
double fluctuation(std::span<const double> profile, std::size_t scale, FluctuationMethod method) {
  const std::size_t windows = profile.size() / scale;
  const double w = static_cast<double>(scale);
  const double x_mean = (w + 1.0) / 2.0;
  const double sxx = w * (w * w - 1.0) / 12.0;
  double acc = 0.0;
  std::vector<double> residual(scale);
  for (std::size_t j = 0; j < windows; ++j) {
    const auto seg = profile.subspan(j * scale, scale);
    double y_mean = 0.0;
    for (double v : seg) y_mean += v;
    y_mean /= w;
    double sxy = 0.0;
    for (std::size_t k = 0; k < scale; ++k) sxy += (static_cast<double>(k + 1) - x_mean) * (seg[k] - y_mean);
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;
    for (std::size_t k = 0; k < scale; ++k) {
      residual[k] = seg[k] - (slope * static_cast<double>(k + 1) + intercept);
    }
    if (method == FluctuationMethod::Dfa) {
      for (double r : residual) acc += r * r;
    } else {
      const auto [mn, mx] = std::minmax_element(residual.begin(), residual.end());
      acc += *mx - *mn;
    }
  }
  if (method == FluctuationMethod::Dfa) return std::sqrt(acc / (static_cast<double>(windows) * w));
  return acc / static_cast<double>(windows);
}

}  // namespace

double fluct_anal_prop_r1(Prepared& p, FluctuationMethod method) {
  const auto z = p.z();
  // DFA reads every second sample.
  const std::size_t stride = method == FluctuationMethod::Dfa ? 2 : 1;
  const std::size_t m = z.size() / stride;
  std::vector<double> profile(m);
  double run = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    run += z[i * stride];
    profile[i] = run;
  }

  const std::vector<std::size_t> scales = log_spaced_scales(z.size());
  const std::size_t s = scales.size();
  if (s < 2 * kMinPointsPerFit) raise(ErrorKind::DegenerateInput, "too few distinct window sizes");

  // Fluctuations at rounding level (e.g. a linear profile) carry no scaling.
  double profile_scale = 0.0;
  for (double v : profile) profile_scale = std::max(profile_scale, std::abs(v));
  const double f_floor = profile_scale * 1e-9;

  std::vector<double> log_scale(s);
  std::vector<double> log_fluct(s);
  for (std::size_t i = 0; i < s; ++i) {
    const double f = fluctuation(profile, scales[i], method);
    if (!(f > f_floor)) raise(ErrorKind::NotComputable, "zero fluctuation at a window size");
    log_scale[i] = std::log(static_cast<double>(scales[i]));
    log_fluct[i] = std::log(f);
  }

  const std::span<const double> lx(log_scale);
  const std::span<const double> ly(log_fluct);
  std::size_t best_k = 0;
  double best_rss = 0.0;
  for (std::size_t k = kMinPointsPerFit; k + kMinPointsPerFit <= s; ++k) {
    const double rss = ols_linfit(lx.first(k), ly.first(k)).rss +
                       ols_linfit(lx.subspan(k), ly.subspan(k)).rss;
    if (best_k == 0 || rss < best_rss) {
      best_k = k;
      best_rss = rss;
    }
  }
  return static_cast<double>(best_k) / static_cast<double>(s);
}

}  // namespace detail

double fluct_anal_prop_r1(const TimeSeries& series, FluctuationMethod method) {
  detail::require_length(series.length(), 64);
  detail::Prepared p(series.samples());
  return detail::fluct_anal_prop_r1(p, method);
}

}  // namespace tscanon
