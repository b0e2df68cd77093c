#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tscanon/core.hpp"
#include "tscanon/features.hpp"

namespace tscanon {

/// Samples x features, all finite, with class labels mapped to dense ids
/// 0..classes-1 in sorted label order.
class LabeledFeatureMatrix {
 public:
  LabeledFeatureMatrix(const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels);
  LabeledFeatureMatrix(std::vector<std::vector<double>> columns, std::vector<int> class_ids,
                       std::vector<std::string> class_names);

  std::size_t samples() const noexcept { return class_ids_.size(); }
  std::size_t features() const noexcept { return columns_.size(); }
  std::size_t classes() const noexcept { return class_names_.size(); }

  double at(std::size_t row, std::size_t feature) const { return columns_[feature][row]; }
  std::span<const double> column(std::size_t feature) const { return columns_[feature]; }
  std::span<const int> class_ids() const noexcept { return class_ids_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  /// Per-class member counts.
  std::vector<std::size_t> class_counts() const;

  /// Same features, permuted labels (used for null distributions).
  LabeledFeatureMatrix with_class_ids(std::vector<int> ids) const;
  /// Only the given columns, in the given order.
  LabeledFeatureMatrix select_features(std::span<const std::size_t> features) const;

 private:
  std::vector<std::vector<double>> columns_;
  std::vector<int> class_ids_;
  std::vector<std::string> class_names_;
};

/// mt19937_64 with portable bounded draws and shuffles, so every platform
/// produces the same folds and permutations for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1).
  double uniform();
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed mixing for derived streams (splitmix64 finaliser).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 for a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int prediction = 0;
    std::vector<std::size_t> class_counts;

    bool is_leaf() const noexcept { return feature < 0; }
  };

  /// Grows on the given rows and columns of `train`; an empty span means all.
  /// A single-class training set becomes one leaf.
  static DecisionTree grow(const LabeledFeatureMatrix& train, std::span<const std::size_t> rows,
                           std::span<const std::size_t> features);

  /// Row values indexed by the full feature width of the training matrix.
  int predict(std::span<const double> row) const;
  int predict(const LabeledFeatureMatrix& m, std::size_t row) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;
  std::size_t leaves() const;

 private:
  std::vector<Node> nodes_;
};

/// CART with Gini impurity on all rows/columns; throws SingleClass.
DecisionTree tree_fit(const LabeledFeatureMatrix& train);

/// min(10, max(2, smallest class size)); throws SingleClass.
std::size_t fold_count(const LabeledFeatureMatrix& matrix);

/// Stratified assignment of samples to folds from a seeded shuffle.
std::vector<std::size_t> stratified_folds(std::span<const int> class_ids, std::size_t n_classes,
                                          std::size_t folds, std::uint64_t seed);

/// Class-balanced accuracy with weights 1 / (class count).
double balanced_accuracy(std::span<const int> y, std::span<const int> yhat);
double unbalanced_accuracy(std::span<const int> y, std::span<const int> yhat);

struct CvResult {
  double mean;
  std::vector<double> fold_accuracies;
};

/// Empty `features` means all columns.
CvResult cross_validate(const LabeledFeatureMatrix& matrix, std::span<const std::size_t> features,
                        std::uint64_t seed);

struct ForwardSelection {
  std::size_t first;
  std::size_t second;
  double first_accuracy;
  double accuracy;
};

ForwardSelection sfs_top2(const LabeledFeatureMatrix& matrix, std::uint64_t seed);

/// Mean over tasks of the mean over folds.
double total_balanced(const std::vector<std::vector<double>>& fold_accuracies);
double total_unbalanced(std::span<const double> per_task);

/// Per-column medians of the finite entries of `reference`, 0 for columns
/// with none. Used to fill markers before tree fitting.
std::vector<double> marker_fill_values(std::span<const FeatureVector> reference);
/// Rows of `vectors` with markers replaced by `fill`.
std::vector<std::vector<double>> impute_markers(std::span<const FeatureVector> vectors, std::span<const double> fill);

}  // namespace tscanon
