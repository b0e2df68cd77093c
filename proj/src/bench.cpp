#include "tscanon/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "tscanon/classify.hpp"
#include "tscanon/features.hpp"
#include "tscanon/stats.hpp"

namespace tscanon {

TimeSeries resample_to_length(const TimeSeries& series, std::size_t target) {
  if (target < 5) raise(ErrorKind::InvalidArgument, "target length must be at least 5");
  const auto x = series.samples();
  const std::size_t n = x.size();
  if (target <= n) return TimeSeries(std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(target)));
  std::vector<double> out(target);
  if (n == 1) {
    std::fill(out.begin(), out.end(), x[0]);
    return TimeSeries(std::move(out));
  }
  const double scale = static_cast<double>(n - 1) / static_cast<double>(target - 1);
  for (std::size_t i = 0; i < target; ++i) {
    const double pos = static_cast<double>(i) * scale;
    const auto lo = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(lo);
    out[i] = x[lo] + frac * (x[lo + 1] - x[lo]);
  }
  out.back() = x[n - 1];
  return TimeSeries(std::move(out));
}

std::vector<BenchRecord> time_extract(std::span<const NamedSeries> series, std::span<const std::size_t> lengths,
                                      std::size_t reps) {
  if (reps == 0) raise(ErrorKind::InvalidArgument, "reps must be at least 1");
  using Clock = std::chrono::steady_clock;
  std::vector<BenchRecord> records;
  records.reserve(series.size() * lengths.size());
  for (const auto& s : series) {
    for (std::size_t len : lengths) {
      const TimeSeries x = resample_to_length(s.series, len);
      double best = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        const FeatureVector v = extract_all(x);
        const auto t1 = Clock::now();
        static_cast<void>(v);
        const double dt = std::chrono::duration<double>(t1 - t0).count();
        if (r == 0 || dt < best) best = dt;
      }
      // A zero reading would break the log fit; clamp to one clock tick.
      const double tick = std::chrono::duration<double>(Clock::duration(1)).count();
      records.push_back({s.id, len, std::max(best, tick)});
    }
  }
  return records;
}

ScalingFit fit_scaling(std::span<const BenchRecord> records) {
  std::map<std::size_t, std::vector<double>> by_length;
  for (const auto& r : records) {
    if (!(r.seconds > 0.0)) raise(ErrorKind::InvalidArgument, "timings must be positive");
    by_length[r.length].push_back(r.seconds);
  }
  if (by_length.size() < 5) raise(ErrorKind::DegenerateInput, "scaling fit needs at least 5 distinct lengths");
  std::vector<double> lx;
  std::vector<double> ly;
  for (auto& [len, times] : by_length) {
    lx.push_back(std::log(static_cast<double>(len)));
    ly.push_back(std::log(median(std::move(times))));
  }
  const LinearFit fit = ols_linfit(lx, ly);
  const double my = mean(ly);
  double tss = 0.0;
  for (double v : ly) tss += (v - my) * (v - my);
  const double r2 = tss > 0.0 ? std::clamp(1.0 - fit.rss / tss, 0.0, 1.0) : 1.0;
  return {fit.slope, std::exp(fit.intercept), r2};
}

std::vector<NamedSeries> synthetic_bench_corpus(std::size_t length, std::uint64_t seed) {
  if (length < 5) raise(ErrorKind::InvalidArgument, "corpus length must be at least 5");
  constexpr double kTwoPi = 6.283185307179586;
  static const char* kinds[] = {"noise", "ar1", "sine", "walk"};
  std::vector<NamedSeries> out;
  for (std::size_t i = 0; i < 40; ++i) {
    Rng rng(mix_seed(seed, i));
    const std::size_t kind = i % 4;
    std::vector<double> x(length);
    double state = 0.0;
    const double phi = 0.5 + 0.045 * static_cast<double>(i / 4);
    const double period = 10.0 + 9.0 * static_cast<double>(i / 4);
    for (std::size_t t = 0; t < length; ++t) {
      const double e = rng.normal();
      switch (kind) {
        case 0:
          x[t] = e;
          break;
        case 1:
          state = phi * state + e;
          x[t] = state;
          break;
        case 2:
          x[t] = std::sin(kTwoPi * static_cast<double>(t) / period) + 0.3 * e;
          break;
        default:
          state += e;
          x[t] = state;
          break;
      }
    }
    out.push_back({std::string(kinds[kind]) + "_" + std::to_string(i / 4), TimeSeries(std::move(x))});
  }
  return out;
}

}  // namespace tscanon
