#include <algorithm>
#include <functional>

#include "internal.hpp"
#include "../parallel.hpp"

namespace tscanon {

namespace {

using Compute = double (*)(detail::Prepared&);

// Same order as the catalog.
const std::array<Compute, kFeatureCount> kCompute = {
    [](detail::Prepared& p) { return detail::histogram_mode(p, 5); },
    [](detail::Prepared& p) { return detail::histogram_mode(p, 10); },
    [](detail::Prepared& p) { return detail::longstretch_above_mean(p); },
    [](detail::Prepared& p) { return detail::outlier_include_mdrmd(p, OutlierSign::Positive); },
    [](detail::Prepared& p) { return detail::outlier_include_mdrmd(p, OutlierSign::Negative); },
    [](detail::Prepared& p) { return detail::f1ecac(p); },
    [](detail::Prepared& p) { return detail::first_min_ac(p, p.size() - 1); },
    [](detail::Prepared& p) { return detail::spectral_area_5_1(p); },
    [](detail::Prepared& p) { return detail::spectral_centroid(p); },
    [](detail::Prepared& p) { return detail::local_mean_forecast_stderr(p, 3); },
    [](detail::Prepared& p) { return detail::trev_num(p); },
    [](detail::Prepared& p) { return detail::histogram_ami(p, 2, 5); },
    [](detail::Prepared& p) { return detail::ami_gaussian_first_min(p, 40); },
    [](detail::Prepared& p) { return detail::pnn40(p); },
    [](detail::Prepared& p) { return detail::longstretch_decreasing(p); },
    [](detail::Prepared& p) { return detail::motif_three_hh(p); },
    [](detail::Prepared& p) { return detail::local_mean1_tauresrat(p); },
    [](detail::Prepared& p) { return detail::embed2_dist_expfit_meandiff(p); },
    [](detail::Prepared& p) { return detail::fluct_anal_prop_r1(p, FluctuationMethod::Dfa); },
    [](detail::Prepared& p) { return detail::fluct_anal_prop_r1(p, FluctuationMethod::RescaledRange); },
    [](detail::Prepared& p) { return detail::transition_matrix_sumdiagcov(p); },
    [](detail::Prepared& p) { return detail::periodicity_wang(p); },
};

FeatureValue marker_for(const Error& e) {
  return e.kind() == ErrorKind::NotComputable ? FeatureValue(Marker::NotComputable)
                                              : FeatureValue(Marker::DegenerateInput);
}

}  // namespace

FeatureVector extract_all(const TimeSeries& series) {
  std::optional<detail::Prepared> prepared;
  try {
    prepared.emplace(series.samples());
  } catch (const Error&) {
    return FeatureVector::filled(Marker::DegenerateInput);
  }

  const auto& catalog = feature_catalog();
  std::vector<FeatureValue> out;
  out.reserve(kFeatureCount);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (series.length() < catalog[i].min_length) {
      out.emplace_back(Marker::DegenerateInput);
      continue;
    }
    try {
      out.emplace_back(kCompute[i](*prepared));
    } catch (const Error& e) {
      out.push_back(marker_for(e));
    }
  }
  return FeatureVector(std::move(out));
}

std::vector<FeatureVector> extract_many(std::span<const TimeSeries> series, unsigned threads) {
  std::vector<std::optional<FeatureVector>> slots(series.size());
  detail::parallel_for(series.size(), threads, [&](std::size_t i) { slots[i] = extract_all(series[i]); });
  std::vector<FeatureVector> out;
  out.reserve(series.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<BatchItem> extract_batch(std::span<const std::vector<double>> series, unsigned threads) {
  std::vector<BatchItem> out(series.size());
  detail::parallel_for(series.size(), threads, [&](std::size_t i) {
    try {
      out[i].features = extract_all(TimeSeries(series[i]));
    } catch (const Error& e) {
      out[i].error = e;
    }
  });
  return out;
}

}  // namespace tscanon
