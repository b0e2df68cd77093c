#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tscanon/core.hpp"

namespace tscanon {

enum class FeatureFamily {
  Distribution,
  SimpleTemporal,
  LinearAutocorr,
  NonlinearAutocorr,
  SuccessiveDifferences,
  Fluctuation,
  Other,
};

const char* to_string(FeatureFamily family);

struct FeatureDescriptor {
  std::string_view name;
  FeatureFamily family;
  std::size_t min_length;
};

inline constexpr std::size_t kFeatureCount = 22;

/// Canonical order used everywhere (tables, bindings, CLI).
const std::array<FeatureDescriptor, kFeatureCount>& feature_catalog();
std::array<std::string_view, kFeatureCount> feature_names();
std::optional<std::size_t> feature_index(std::string_view name);

class FeatureVector {
 public:
  explicit FeatureVector(std::vector<FeatureValue> entries);

  /// Every entry set to the same marker.
  static FeatureVector filled(Marker m);

  static constexpr std::size_t size() noexcept { return kFeatureCount; }
  const FeatureValue& operator[](std::size_t i) const { return entries_[i]; }
  const FeatureValue& at(std::string_view name) const;
  std::string_view name(std::size_t i) const;

  const std::vector<FeatureValue>& entries() const noexcept { return entries_; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<FeatureValue> entries_;
};

enum class OutlierSign { Positive, Negative };
enum class FluctuationMethod { Dfa, RescaledRange };

// Each feature z-scores its input first. Failures throw tscanon::Error with
// kind DegenerateInput (too short, constant, degenerate construction) or
// NotComputable (a fit or search that has no answer).

double histogram_mode(const TimeSeries& series, std::size_t n_bins);
double longstretch_above_mean(const TimeSeries& series);
double longstretch_decreasing(const TimeSeries& series);
double outlier_include_mdrmd(const TimeSeries& series, OutlierSign sign);
double f1ecac(const TimeSeries& series);
/// max_lag defaults to length-1.
double first_min_ac(const TimeSeries& series, std::optional<std::size_t> max_lag = std::nullopt);
double spectral_area_5_1(const TimeSeries& series);
double spectral_centroid(const TimeSeries& series);
double local_mean_forecast_stderr(const TimeSeries& series, std::size_t window = 3);
double local_mean1_tauresrat(const TimeSeries& series);
double trev_num(const TimeSeries& series);
double histogram_ami(const TimeSeries& series, std::size_t lag = 2, std::size_t n_bins = 5);
double ami_gaussian_first_min(const TimeSeries& series, std::size_t max_lag = 40);
double pnn40(const TimeSeries& series);
double motif_three_hh(const TimeSeries& series);
double embed2_dist_expfit_meandiff(const TimeSeries& series);
double fluct_anal_prop_r1(const TimeSeries& series, FluctuationMethod method);
double transition_matrix_sumdiagcov(const TimeSeries& series);
double periodicity_wang(const TimeSeries& series);

/// Never throws on numeric failure: per-feature problems become markers, a
/// constant series yields 22 DegenerateInput markers.
FeatureVector extract_all(const TimeSeries& series);

/// Result for one entry of a batch; `error` is set when the raw samples did
/// not validate (empty or non-finite).
struct BatchItem {
  std::optional<FeatureVector> features;
  std::optional<Error> error;
};

/// Order preserving; results do not depend on `threads`.
std::vector<BatchItem> extract_batch(std::span<const std::vector<double>> series, unsigned threads);
std::vector<FeatureVector> extract_many(std::span<const TimeSeries> series, unsigned threads);

}  // namespace tscanon
