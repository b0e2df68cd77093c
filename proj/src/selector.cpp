#include "tscanon/selector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "tscanon/stats.hpp"

namespace tscanon {

void TaskResultMatrix::validate() const {
  if (values.empty()) raise(ErrorKind::EmptyInput, "accuracy matrix has no features");
  if (task_names.empty()) raise(ErrorKind::EmptyInput, "accuracy matrix has no tasks");
  if (!feature_names.empty() && feature_names.size() != values.size()) {
    raise(ErrorKind::LengthMismatch, "feature names do not match rows");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != task_names.size()) raise(ErrorKind::LengthMismatch, "row width differs from task count", i);
    for (const auto& v : values[i]) {
      if (v && !(std::isfinite(*v) && *v >= 0.0)) raise(ErrorKind::InvalidArgument, "accuracy out of range", i);
    }
  }
}

TaskResultMatrix TaskResultMatrix::rows(std::span<const std::size_t> keep) const {
  TaskResultMatrix out;
  out.task_names = task_names;
  for (std::size_t i : keep) {
    out.values.push_back(values.at(i));
    if (!feature_names.empty()) out.feature_names.push_back(feature_names.at(i));
  }
  return out;
}

std::vector<std::size_t> special_value_prefilter(const std::vector<std::vector<bool>>& special, double threshold) {
  if (special.empty()) raise(ErrorKind::EmptyInput, "prefilter needs at least one task");
  const std::size_t features = special.front().size();
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < features; ++f) {
    std::size_t hits = 0;
    for (const auto& task : special) {
      if (task.size() != features) raise(ErrorKind::LengthMismatch, "tasks disagree on feature count");
      hits += task[f] ? 1 : 0;
    }
    const double fraction = static_cast<double>(hits) / static_cast<double>(special.size());
    if (!(fraction > threshold)) keep.push_back(f);
  }
  return keep;
}

NullDistribution permutation_null(const LabeledFeatureMatrix& matrix, std::size_t feature, std::size_t repeats,
                                  std::uint64_t seed, unsigned threads) {
  if (repeats < 2) raise(ErrorKind::InvalidArgument, "null distribution needs at least 2 repeats");
  if (feature >= matrix.features()) raise(ErrorKind::InvalidArgument, "feature index out of range");
  const std::size_t cols[] = {feature};
  const LabeledFeatureMatrix single = matrix.select_features(cols);
  const auto ids = single.class_ids();

  NullDistribution null{std::vector<double>(repeats, 0.0), repeats};
  std::vector<std::optional<Error>> failures(repeats);
  detail::parallel_for(repeats, threads, [&](std::size_t r) {
    try {
      const std::uint64_t derived = seed ^ static_cast<std::uint64_t>(r);
      std::vector<int> shuffled(ids.begin(), ids.end());
      Rng rng(derived);
      rng.shuffle(shuffled);
      null.shuffled_accuracies[r] = cross_validate(single.with_class_ids(std::move(shuffled)), {}, mix_seed(derived, 0)).mean;
    } catch (const Error& e) {
      failures[r] = e;
    }
  });
  for (auto& f : failures) {
    if (f) throw *f;
  }
  return null;
}

double gaussian_pvalue(const NullDistribution& null, double observed) {
  const auto& a = null.shuffled_accuracies;
  if (a.size() < 2) raise(ErrorKind::DegenerateNull, "null distribution has fewer than 2 values");
  const double sd = sample_stddev(a);
  if (!(sd > 0.0)) raise(ErrorKind::DegenerateNull, "null distribution has zero spread");
  return normal_sf((observed - mean(a)) / sd);
}

double empirical_pvalue(const NullDistribution& null, double observed) {
  const auto& a = null.shuffled_accuracies;
  if (a.empty()) raise(ErrorKind::DegenerateNull, "empty null distribution");
  const auto at_least = std::count_if(a.begin(), a.end(), [&](double v) { return v >= observed; });
  return static_cast<double>(at_least + 1) / static_cast<double>(a.size() + 1);
}

double clamp_pvalue(double p) { return std::max(p, kMinPValue); }

double fisher_combine(std::span<const double> pvalues) {
  if (pvalues.empty()) raise(ErrorKind::EmptyInput, "no p-values to combine");
  double x = 0.0;
  for (std::size_t j = 0; j < pvalues.size(); ++j) {
    const double p = pvalues[j];
    if (p == 0.0) raise(ErrorKind::ZeroPValue, "p-value of zero; clamp before combining", j);
    if (!(p > 0.0 && p <= 1.0)) raise(ErrorKind::InvalidArgument, "p-value outside (0, 1]", j);
    x -= 2.0 * std::log(p);
  }
  return chi2_sf(x, static_cast<int>(2 * pvalues.size()));
}

std::vector<bool> holm_bonferroni(std::span<const double> pvalues, double alpha) {
  const std::size_t m = pvalues.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::vector<bool> reject(m, false);
  for (std::size_t k = 0; k < m; ++k) {
    if (!(pvalues[order[k]] < alpha / static_cast<double>(m - k))) break;
    reject[order[k]] = true;
  }
  return reject;
}

TaskResultMatrix normalize_accuracies(const TaskResultMatrix& matrix) {
  matrix.validate();
  TaskResultMatrix out = matrix;
  for (std::size_t j = 0; j < matrix.tasks(); ++j) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& row : matrix.values) {
      if (row[j]) {
        sum += *row[j];
        ++count;
      }
    }
    double m = count > 0 ? sum / static_cast<double>(count) : 0.0;
    if (count > 0) {
      // One refinement pass; exact for an all-equal column.
      double resid = 0.0;
      for (const auto& row : matrix.values) {
        if (row[j]) resid += *row[j] - m;
      }
      m += resid / static_cast<double>(count);
    }
    if (!(m > 0.0)) raise(ErrorKind::ZeroColumnMean, "task column has no computed entries or zero mean", j);
    for (auto& row : out.values) {
      if (row[j]) row[j] = *row[j] / m;
    }
  }
  return out;
}

std::vector<double> combine_scores(const TaskResultMatrix& norm) {
  std::vector<double> scores;
  scores.reserve(norm.features());
  for (std::size_t i = 0; i < norm.features(); ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& v : norm.values[i]) {
      if (v) {
        sum += *v;
        ++count;
      }
    }
    if (count == 0) raise(ErrorKind::AllMarkersRow, "feature has no computed accuracy", i);
    scores.push_back(sum / static_cast<double>(count));
  }
  return scores;
}

std::vector<std::size_t> threshold_top(std::span<const double> scores) {
  if (scores.size() < 2) raise(ErrorKind::InvalidArgument, "threshold needs at least 2 scores");
  const double cut = mean(scores) + sample_stddev(scores);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > cut) keep.push_back(i);
  }
  return keep;
}

std::vector<std::size_t> top_beta(std::span<const double> scores, std::size_t beta) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(beta, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::vector<double>> performance_correlation_distance(const TaskResultMatrix& norm, DistancePolicy policy) {
  const std::size_t f = norm.features();
  std::vector<std::vector<double>> d(f, std::vector<double>(f, 0.0));
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < f; ++i) {
    for (std::size_t j = i + 1; j < f; ++j) {
      x.clear();
      y.clear();
      for (std::size_t t = 0; t < norm.values[i].size(); ++t) {
        if (norm.values[i][t] && norm.values[j][t]) {
          x.push_back(*norm.values[i][t]);
          y.push_back(*norm.values[j][t]);
        }
      }
      const bool identical = x == y;
      double dist = identical ? 0.0 : 1.0;
      if (x.size() < 3) {
        if (policy == DistancePolicy::Strict) raise(ErrorKind::DegenerateInput, "fewer than 3 shared tasks", i);
      } else {
        const double mx = mean(x);
        const double my = mean(y);
        double sxx = 0.0;
        double syy = 0.0;
        double sxy = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
          sxx += (x[k] - mx) * (x[k] - mx);
          syy += (y[k] - my) * (y[k] - my);
          sxy += (x[k] - mx) * (y[k] - my);
        }
        if (sxx > 0.0 && syy > 0.0) {
          const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
          dist = 1.0 - r;
        } else if (policy == DistancePolicy::Strict) {
          raise(ErrorKind::ConstantRow, "performance row is constant", sxx > 0.0 ? j : i);
        }
      }
      d[i][j] = dist;
      d[j][i] = dist;
    }
  }
  return d;
}

ClusterAssignment complete_linkage_cluster(const std::vector<std::vector<double>>& distances, double gamma) {
  const std::size_t n = distances.size();
  for (const auto& row : distances) {
    if (row.size() != n) raise(ErrorKind::InvalidArgument, "distance matrix is not square");
    for (double v : row) {
      if (!std::isfinite(v)) raise(ErrorKind::InvalidArgument, "non-finite distance");
    }
  }
  // Slot k keeps the cluster whose smallest member is k, so scanning slots in
  // order visits clusters in lexicographic member order.
  std::vector<std::vector<double>> link = distances;
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<bool> active(n, true);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  for (;;) {
    double best = 0.0;
    std::size_t ba = n;
    std::size_t bb = n;
    for (std::size_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        if (ba == n || link[a][b] < best) {
          best = link[a][b];
          ba = a;
          bb = b;
        }
      }
    }
    if (ba == n || !(best < gamma)) break;
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == ba || c == bb) continue;
      const double h = std::max(link[ba][c], link[bb][c]);
      link[ba][c] = h;
      link[c][ba] = h;
    }
    members[ba].insert(members[ba].end(), members[bb].begin(), members[bb].end());
    std::sort(members[ba].begin(), members[ba].end());
    members[bb].clear();
    active[bb] = false;
  }

  ClusterAssignment out;
  out.gamma = gamma;
  out.cluster_of.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!active[k]) continue;
    for (std::size_t m : members[k]) out.cluster_of[m] = out.members.size();
    out.members.push_back(std::move(members[k]));
  }
  return out;
}

std::vector<std::size_t> select_representatives(const ClusterAssignment& assignment, std::span<const double> scores,
                                                RepresentativeMode mode, std::span<const std::string> names,
                                                std::span<const std::string> curated) {
  std::vector<std::size_t> reps;
  if (mode == RepresentativeMode::BestScore) {
    if (scores.size() != assignment.cluster_of.size()) raise(ErrorKind::LengthMismatch, "one score per member expected");
    for (const auto& cluster : assignment.members) {
      if (cluster.empty()) raise(ErrorKind::InvalidArgument, "empty cluster");
      std::size_t best = cluster.front();
      for (std::size_t m : cluster) {
        if (scores[m] > scores[best]) best = m;
      }
      reps.push_back(best);
    }
    return reps;
  }
  if (names.size() != assignment.cluster_of.size()) raise(ErrorKind::LengthMismatch, "one name per member expected");
  if (curated.size() != assignment.members.size()) raise(ErrorKind::LengthMismatch, "one curated name per cluster expected");
  for (std::size_t c = 0; c < assignment.members.size(); ++c) {
    const auto& cluster = assignment.members[c];
    const auto it = std::find_if(cluster.begin(), cluster.end(), [&](std::size_t m) { return names[m] == curated[c]; });
    if (it == cluster.end()) raise(ErrorKind::CuratedNameNotInCluster, "'" + curated[c] + "' is not a member of its cluster", c);
    reps.push_back(*it);
  }
  return reps;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace tscanon
