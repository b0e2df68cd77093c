#include <algorithm>
#include <numeric>

#include "internal.hpp"

namespace tscanon {
namespace detail {

namespace {

/// Counts over positions 1..n with k-th smallest lookup.
class OrderStatistics {
 public:
  explicit OrderStatistics(std::size_t n) : tree_(n + 1, 0) {
    top_bit_ = 1;
    while (top_bit_ * 2 <= n) top_bit_ *= 2;
  }

  void insert(std::size_t pos) {
    for (; pos < tree_.size(); pos += pos & (~pos + 1)) ++tree_[pos];
  }

  /// 1-based position of the k-th smallest inserted element (k >= 1).
  std::size_t kth(std::size_t k) const {
    std::size_t pos = 0;
    for (std::size_t step = top_bit_; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] < k) {
        pos = next;
        k -= tree_[next];
      }
    }
    return pos + 1;
  }

 private:
  std::vector<std::size_t> tree_;
  std::size_t top_bit_;
};

constexpr double kThresholdStep = 0.01;

}  // namespace

double longstretch_above_mean(Prepared& p) {
  // z > 0 is exactly x > mean(x) for the computed mean.
  std::size_t best = 0;
  std::size_t run = 0;
  for (double v : p.z()) {
    run = v > 0.0 ? run + 1 : 0;
    best = std::max(best, run);
  }
  return static_cast<double>(best);
}

double outlier_include_mdrmd(Prepared& p, OutlierSign sign) {
  const auto z = p.z();
  const std::size_t n = z.size();
  const double s = sign == OutlierSign::Positive ? 1.0 : -1.0;
  std::vector<double> y(n);
  for (std::size_t t = 0; t < n; ++t) y[t] = s * z[t];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return y[a] != y[b] ? y[a] > y[b] : a < b;
  });
  const double top = y[order.front()];

  std::size_t n_thresholds = 0;
  while (static_cast<double>(n_thresholds) * kThresholdStep <= top) ++n_thresholds;

  // Sweep thresholds downward so the event set only grows.
  OrderStatistics events(n);
  std::size_t count = 0;
  std::vector<double> record;
  for (std::size_t i = n_thresholds; i-- > 0;) {
    const double theta = static_cast<double>(i) * kThresholdStep;
    while (count < n && y[order[count]] >= theta) {
      events.insert(order[count] + 1);
      ++count;
    }
    if (count < 2 || 50 * count < n) continue;
    double med;
    if (count % 2 == 1) {
      med = static_cast<double>(events.kth((count + 1) / 2));
    } else {
      med = 0.5 * static_cast<double>(events.kth(count / 2) + events.kth(count / 2 + 1));
    }
    record.push_back(2.0 * med / static_cast<double>(n) - 1.0);
  }
  if (record.empty()) raise(ErrorKind::NotComputable, "no threshold has enough qualifying events");
  return median(std::move(record));
}

}  // namespace detail

double longstretch_above_mean(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::longstretch_above_mean(p);
}

double outlier_include_mdrmd(const TimeSeries& series, OutlierSign sign) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::outlier_include_mdrmd(p, sign);
}

}  // namespace tscanon
