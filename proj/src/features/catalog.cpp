#include <cmath>

#include "internal.hpp"

namespace tscanon {

namespace {

using F = FeatureFamily;

constexpr std::array<FeatureDescriptor, kFeatureCount> kCatalog = {{
    {"DN_HistogramMode_5", F::Distribution, 5},
    {"DN_HistogramMode_10", F::Distribution, 5},
    {"SB_BinaryStats_mean_longstretch1", F::SimpleTemporal, 5},
    {"DN_OutlierInclude_p_001_mdrmd", F::SimpleTemporal, 5},
    {"DN_OutlierInclude_n_001_mdrmd", F::SimpleTemporal, 5},
    {"CO_f1ecac", F::LinearAutocorr, 5},
    {"CO_FirstMin_ac", F::LinearAutocorr, 5},
    {"SP_Summaries_welch_rect_area_5_1", F::LinearAutocorr, 16},
    {"SP_Summaries_welch_rect_centroid", F::LinearAutocorr, 16},
    {"FC_LocalSimple_mean3_stderr", F::LinearAutocorr, 5},
    {"CO_trev_1_num", F::NonlinearAutocorr, 5},
    {"CO_HistogramAMI_even_2_5", F::NonlinearAutocorr, 5},
    {"IN_AutoMutualInfoStats_40_gaussian_fmmi", F::NonlinearAutocorr, 5},
    {"MD_hrv_classic_pnn40", F::SuccessiveDifferences, 5},
    {"SB_BinaryStats_diff_longstretch0", F::SuccessiveDifferences, 5},
    {"SB_MotifThree_quantile_hh", F::SuccessiveDifferences, 5},
    {"FC_LocalSimple_mean1_tauresrat", F::SuccessiveDifferences, 5},
    {"CO_Embed2_Dist_tau_d_expfit_meandiff", F::SuccessiveDifferences, 5},
    {"SC_FluctAnal_2_dfa_50_1_2_logi_prop_r1", F::Fluctuation, 64},
    {"SC_FluctAnal_2_rsrangefit_50_1_logi_prop_r1", F::Fluctuation, 64},
    {"SB_TransitionMatrix_3ac_sumdiagcov", F::Other, 5},
    {"PD_PeriodicityWang_th0_01", F::Other, 5},
}};

}  // namespace

const char* to_string(FeatureFamily family) {
  switch (family) {
    case F::Distribution: return "distribution";
    case F::SimpleTemporal: return "simple-temporal";
    case F::LinearAutocorr: return "linear-autocorr";
    case F::NonlinearAutocorr: return "nonlinear-autocorr";
    case F::SuccessiveDifferences: return "successive-differences";
    case F::Fluctuation: return "fluctuation";
    case F::Other: return "other";
  }
  return "unknown";
}

const std::array<FeatureDescriptor, kFeatureCount>& feature_catalog() { return kCatalog; }

std::array<std::string_view, kFeatureCount> feature_names() {
  std::array<std::string_view, kFeatureCount> names{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) names[i] = kCatalog[i].name;
  return names;
}

std::optional<std::size_t> feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kCatalog[i].name == name) return i;
  }
  return std::nullopt;
}

FeatureVector::FeatureVector(std::vector<FeatureValue> entries) : entries_(std::move(entries)) {
  if (entries_.size() != kFeatureCount) {
    raise(ErrorKind::InvalidArgument, "a feature vector holds exactly 22 entries");
  }
}

FeatureVector FeatureVector::filled(Marker m) {
  return FeatureVector(std::vector<FeatureValue>(kFeatureCount, FeatureValue(m)));
}

const FeatureValue& FeatureVector::at(std::string_view name) const {
  const auto idx = feature_index(name);
  if (!idx) raise(ErrorKind::InvalidArgument, "unknown feature name " + std::string(name));
  return entries_[*idx];
}

std::string_view FeatureVector::name(std::size_t i) const { return kCatalog.at(i).name; }

namespace detail {

void require_length(std::size_t n, std::size_t min_length) {
  if (n < min_length) {
    raise(ErrorKind::DegenerateInput,
          "series of length " + std::to_string(n) + " is shorter than " + std::to_string(min_length));
  }
}

double entropy_nats(std::span<const double> counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace detail
}  // namespace tscanon
