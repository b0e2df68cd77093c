#include "tscanon/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tscanon {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NotComputable: return "NotComputable";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateNull: return "DegenerateNull";
    case ErrorKind::ZeroPValue: return "ZeroPValue";
    case ErrorKind::ZeroColumnMean: return "ZeroColumnMean";
    case ErrorKind::AllMarkersRow: return "AllMarkersRow";
    case ErrorKind::ConstantRow: return "ConstantRow";
    case ErrorKind::CuratedNameNotInCluster: return "CuratedNameNotInCluster";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what, std::size_t index)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), index_(index) {}

void raise(ErrorKind kind, const std::string& what, std::size_t index) {
  throw Error(kind, what, index);
}

TimeSeries::TimeSeries(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) raise(ErrorKind::EmptyInput, "time series has no samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      raise(ErrorKind::NonFiniteSample, "sample " + std::to_string(i) + " is not finite", i);
    }
  }
}

TimeSeries validate_series(std::span<const double> raw) {
  return TimeSeries(std::vector<double>(raw.begin(), raw.end()));
}

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double sample_stddev(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double median(std::vector<double> x) {
  const std::size_t n = x.size();
  const std::size_t mid = n / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  const double hi = x[mid];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

std::vector<double> zscore_values(std::span<const double> x) {
  if (x.size() < 2) raise(ErrorKind::DegenerateInput, "z-score needs at least 2 samples");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  // A constant series can leave rounding residue in ss; compare against the
  // magnitude of the data rather than exact zero.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (!(sd > 0.0) || sd <= scale * 1e-14) {
    raise(ErrorKind::DegenerateInput, "z-score of a constant series");
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / sd;
  return out;
}

TimeSeries zscore(const TimeSeries& series) { return TimeSeries(zscore_values(series.samples())); }

const char* to_string(Marker m) {
  return m == Marker::NotComputable ? "NotComputable" : "DegenerateInput";
}

FeatureValue::FeatureValue(double v) : data_(v) {
  if (!std::isfinite(v)) data_ = Marker::NotComputable;
}

FeatureValue::FeatureValue(Marker m) : data_(m) {}

double FeatureValue::value() const {
  if (const double* v = std::get_if<double>(&data_)) return *v;
  const Marker m = std::get<Marker>(data_);
  raise(m == Marker::NotComputable ? ErrorKind::NotComputable : ErrorKind::DegenerateInput,
        "feature value holds a marker");
}

Marker FeatureValue::marker() const {
  if (const Marker* m = std::get_if<Marker>(&data_)) return *m;
  raise(ErrorKind::InvalidArgument, "feature value holds a number, not a marker");
}

double FeatureValue::value_or_nan() const noexcept {
  if (const double* v = std::get_if<double>(&data_)) return *v;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace tscanon
