#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tscanon {

enum class ErrorKind {
  DegenerateInput,
  NotComputable,
  NonFiniteSample,
  EmptyInput,
  SingleClass,
  LengthMismatch,
  DegenerateNull,
  ZeroPValue,
  ZeroColumnMean,
  AllMarkersRow,
  ConstantRow,
  CuratedNameNotInCluster,
  MalformedLine,
  EmptyFile,
  IoFailure,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind. `index` holds the offending
/// sample index or line number when the kind has one, otherwise npos.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorKind kind, const std::string& what, std::size_t index = npos);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::size_t index_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what, std::size_t index = Error::npos);

/// Finite, non-empty, ordered samples. Immutable after construction.
class TimeSeries {
 public:
  /// Validates; throws EmptyInput or NonFiniteSample(index).
  explicit TimeSeries(std::vector<double> samples);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t length() const noexcept { return samples_.size(); }
  double operator[](std::size_t t) const noexcept { return samples_[t]; }

  const std::vector<double>& vector() const noexcept { return samples_; }

 private:
  std::vector<double> samples_;
};

TimeSeries validate_series(std::span<const double> raw);

/// Mean 0, sample (N-1) standard deviation 1. DegenerateInput when N < 2 or
/// the series is constant.
TimeSeries zscore(const TimeSeries& series);

/// Same as zscore on an already validated buffer.
std::vector<double> zscore_values(std::span<const double> x);

enum class Marker { NotComputable, DegenerateInput };

const char* to_string(Marker m);

class FeatureValue {
 public:
  FeatureValue(double v);  // NOLINT(google-explicit-constructor)
  FeatureValue(Marker m);  // NOLINT(google-explicit-constructor)

  bool has_value() const noexcept { return std::holds_alternative<double>(data_); }
  bool is_marker() const noexcept { return !has_value(); }

  /// Throws NotComputable/DegenerateInput if a marker is held.
  double value() const;
  Marker marker() const;

  /// Value, or quiet NaN for a marker.
  double value_or_nan() const noexcept;

  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;

 private:
  std::variant<double, Marker> data_;
};

double mean(std::span<const double> x);
/// Sample (N-1) variance.
double sample_variance(std::span<const double> x);
double sample_stddev(std::span<const double> x);
double median(std::vector<double> x);

}  // namespace tscanon
