#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tscanon/core.hpp"

namespace tscanon {

struct BenchRecord {
  std::string series_id;
  std::size_t length;
  double seconds;
};

struct ScalingFit {
  double exponent;
  double prefactor;
  double r_squared;
};

struct NamedSeries {
  std::string id;
  TimeSeries series;
};

/// Truncates when shortening; linear interpolation over the whole series
/// when lengthening.
TimeSeries resample_to_length(const TimeSeries& series, std::size_t target);

/// Minimum wall time of extract_all over `reps` runs for each (series,
/// length), series-major in input order.
std::vector<BenchRecord> time_extract(std::span<const NamedSeries> series, std::span<const std::size_t> lengths,
                                      std::size_t reps = 3);

/// ln(median seconds per length) against ln(length). Needs 5 distinct lengths.
ScalingFit fit_scaling(std::span<const BenchRecord> records);

/// 40 series: white noise, AR(1), noisy sinusoids and random walks.
std::vector<NamedSeries> synthetic_bench_corpus(std::size_t length = 10000, std::uint64_t seed = 0);

inline const std::vector<std::size_t>& default_bench_lengths() {
  static const std::vector<std::size_t> lengths = {50, 100, 250, 500, 1000, 2500, 5000, 10000};
  return lengths;
}

}  // namespace tscanon
