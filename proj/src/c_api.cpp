#include "tscanon/tscanon_c.h"

#include <cmath>
#include <limits>

#include "tscanon/features.hpp"

namespace {

using namespace tscanon;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return TSCANON_EMPTY_INPUT;
    case ErrorKind::NonFiniteSample: return TSCANON_NON_FINITE_SAMPLE;
    default: return TSCANON_INTERNAL_ERROR;
  }
}

void fill_row(const FeatureVector& v, double* values, uint8_t* flags) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const FeatureValue& e = v[i];
    values[i] = e.value_or_nan();
    if (flags == nullptr) continue;
    if (e.has_value()) {
      flags[i] = TSCANON_FLAG_NONE;
    } else {
      flags[i] = e.marker() == Marker::NotComputable ? TSCANON_FLAG_NOT_COMPUTABLE : TSCANON_FLAG_DEGENERATE_INPUT;
    }
  }
}

void fill_failed(double* values, uint8_t* flags) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    values[i] = kNaN;
    if (flags != nullptr) flags[i] = TSCANON_FLAG_NONE;
  }
}

}  // namespace

extern "C" {

size_t tscanon_feature_count(void) { return kFeatureCount; }

const char* tscanon_feature_name(size_t i) {
  if (i >= kFeatureCount) return nullptr;
  return feature_catalog()[i].name.data();
}

int tscanon_extract(const double* x, size_t n, double* values, uint8_t* flags, size_t* bad_index) {
  if (values == nullptr || (x == nullptr && n > 0)) return TSCANON_INVALID_ARGUMENT;
  try {
    const TimeSeries series(std::vector<double>(x, x + n));
    fill_row(extract_all(series), values, flags);
    return TSCANON_OK;
  } catch (const Error& e) {
    fill_failed(values, flags);
    if (bad_index != nullptr) *bad_index = e.index();
    return status_of(e.kind());
  } catch (...) {
    fill_failed(values, flags);
    return TSCANON_INTERNAL_ERROR;
  }
}

int tscanon_extract_batch(const double* const* series, const size_t* lengths, size_t count, unsigned threads,
                          double* values, uint8_t* flags, int* statuses, size_t* bad_indices) {
  if (count == 0) return TSCANON_OK;
  if (series == nullptr || lengths == nullptr || values == nullptr) return TSCANON_INVALID_ARGUMENT;
  try {
    std::vector<std::vector<double>> raw;
    raw.reserve(count);
    for (size_t k = 0; k < count; ++k) {
      if (series[k] == nullptr && lengths[k] > 0) return TSCANON_INVALID_ARGUMENT;
      raw.emplace_back(series[k], series[k] + lengths[k]);
    }
    const std::vector<BatchItem> items = extract_batch(raw, threads);
    for (size_t k = 0; k < count; ++k) {
      double* row = values + k * kFeatureCount;
      uint8_t* frow = flags == nullptr ? nullptr : flags + k * kFeatureCount;
      if (items[k].features) {
        fill_row(*items[k].features, row, frow);
        if (statuses != nullptr) statuses[k] = TSCANON_OK;
        if (bad_indices != nullptr) bad_indices[k] = Error::npos;
      } else {
        fill_failed(row, frow);
        if (statuses != nullptr) statuses[k] = status_of(items[k].error->kind());
        if (bad_indices != nullptr) bad_indices[k] = items[k].error->index();
      }
    }
    return TSCANON_OK;
  } catch (...) {
    return TSCANON_INTERNAL_ERROR;
  }
}

}  // extern "C"
