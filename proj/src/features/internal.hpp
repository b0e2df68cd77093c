#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tscanon/features.hpp"
#include "tscanon/stats.hpp"

namespace tscanon::detail {

/// z-scored samples plus the full-length ACF, computed once on demand.
class Prepared {
 public:
  explicit Prepared(std::span<const double> raw) : z_(zscore_values(raw)) {}

  std::span<const double> z() const noexcept { return z_; }
  std::size_t size() const noexcept { return z_.size(); }

  const Acf& acf() {
    if (!acf_) acf_ = autocorr(z_, z_.size() - 1);
    return *acf_;
  }

  std::size_t first_zero() {
    if (z_.size() < 3) raise(ErrorKind::DegenerateInput, "first zero crossing needs at least 3 samples");
    return first_zero_ac(acf());
  }

 private:
  std::vector<double> z_;
  std::optional<Acf> acf_;
};

double histogram_mode(Prepared& p, std::size_t n_bins);
double longstretch_above_mean(Prepared& p);
double longstretch_decreasing(Prepared& p);
double outlier_include_mdrmd(Prepared& p, OutlierSign sign);
double f1ecac(Prepared& p);
double first_min_ac(Prepared& p, std::size_t max_lag);
double spectral_area_5_1(Prepared& p);
double spectral_centroid(Prepared& p);
double local_mean_forecast_stderr(Prepared& p, std::size_t window);
double local_mean1_tauresrat(Prepared& p);
double trev_num(Prepared& p);
double histogram_ami(Prepared& p, std::size_t lag, std::size_t n_bins);
double ami_gaussian_first_min(Prepared& p, std::size_t max_lag);
double pnn40(Prepared& p);
double motif_three_hh(Prepared& p);
double embed2_dist_expfit_meandiff(Prepared& p);
double fluct_anal_prop_r1(Prepared& p, FluctuationMethod method);
double transition_matrix_sumdiagcov(Prepared& p);
double periodicity_wang(Prepared& p);

void require_length(std::size_t n, std::size_t min_length);

/// Shannon entropy in nats of a count table.
double entropy_nats(std::span<const double> counts, double total);

}  // namespace tscanon::detail
