#include "tscanon/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace tscanon {

// ---------------------------------------------------------------------------
// LabeledFeatureMatrix

LabeledFeatureMatrix::LabeledFeatureMatrix(const std::vector<std::vector<double>>& rows,
                                           const std::vector<std::string>& labels) {
  if (rows.size() != labels.size()) raise(ErrorKind::LengthMismatch, "rows and labels differ in length");
  if (rows.empty()) raise(ErrorKind::EmptyInput, "feature matrix has no rows");
  const std::size_t width = rows.front().size();
  std::map<std::string, int> ids;
  for (const auto& l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [name, id] : ids) {
    id = next++;
    class_names_.push_back(name);
  }
  columns_.assign(width, std::vector<double>(rows.size()));
  class_ids_.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) raise(ErrorKind::LengthMismatch, "ragged feature matrix");
    for (std::size_t f = 0; f < width; ++f) {
      if (!std::isfinite(rows[r][f])) raise(ErrorKind::NonFiniteSample, "non-finite feature value", r);
      columns_[f][r] = rows[r][f];
    }
    class_ids_[r] = ids.at(labels[r]);
  }
}

LabeledFeatureMatrix::LabeledFeatureMatrix(std::vector<std::vector<double>> columns, std::vector<int> class_ids,
                                           std::vector<std::string> class_names)
    : columns_(std::move(columns)), class_ids_(std::move(class_ids)), class_names_(std::move(class_names)) {
  if (class_ids_.empty()) raise(ErrorKind::EmptyInput, "feature matrix has no rows");
  for (const auto& col : columns_) {
    if (col.size() != class_ids_.size()) raise(ErrorKind::LengthMismatch, "column length differs from labels");
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (!std::isfinite(col[r])) raise(ErrorKind::NonFiniteSample, "non-finite feature value", r);
    }
  }
  for (int id : class_ids_) {
    if (id < 0 || static_cast<std::size_t>(id) >= class_names_.size()) {
      raise(ErrorKind::InvalidArgument, "class id out of range");
    }
  }
}

std::vector<std::size_t> LabeledFeatureMatrix::class_counts() const {
  std::vector<std::size_t> counts(classes(), 0);
  for (int id : class_ids_) ++counts[static_cast<std::size_t>(id)];
  return counts;
}

LabeledFeatureMatrix LabeledFeatureMatrix::with_class_ids(std::vector<int> ids) const {
  return LabeledFeatureMatrix(columns_, std::move(ids), class_names_);
}

LabeledFeatureMatrix LabeledFeatureMatrix::select_features(std::span<const std::size_t> features) const {
  std::vector<std::vector<double>> cols;
  cols.reserve(features.size());
  for (std::size_t f : features) cols.push_back(columns_.at(f));
  return LabeledFeatureMatrix(std::move(cols), class_ids_, class_names_);
}

// ---------------------------------------------------------------------------
// Rng

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) raise(ErrorKind::InvalidArgument, "empty range");
  // Reject the low partial block so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 2.0 * 3.14159265358979323846 * v;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// DecisionTree

namespace {

__extension__ using Wide = __int128;

struct Split {
  bool found = false;
  std::size_t feature_slot = 0;
  double threshold = 0.0;
  // Gini gain proxy sum_c l_c^2 / n_l + sum_c r_c^2 / n_r as an exact fraction.
  Wide num = 0;
  Wide den = 1;
};

int majority(const std::vector<std::size_t>& counts) {
  // Lowest class id wins ties.
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

double split_point(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

}  // namespace

DecisionTree DecisionTree::grow(const LabeledFeatureMatrix& train, std::span<const std::size_t> rows_in,
                                std::span<const std::size_t> features_in) {
  std::vector<std::size_t> rows(rows_in.begin(), rows_in.end());
  if (rows.empty()) {
    rows.resize(train.samples());
    std::iota(rows.begin(), rows.end(), 0);
  }
  std::vector<std::size_t> features(features_in.begin(), features_in.end());
  if (features.empty()) {
    features.resize(train.features());
    std::iota(features.begin(), features.end(), 0);
  }
  const std::size_t n_classes = train.classes();
  const auto labels = train.class_ids();

  // One presorted row list per feature; segments stay sorted under stable
  // partitioning, so each node is scanned in linear time.
  std::vector<std::vector<std::size_t>> sorted(features.size(), rows);
  for (std::size_t s = 0; s < features.size(); ++s) {
    const auto col = train.column(features[s]);
    std::sort(sorted[s].begin(), sorted[s].end(), [&](std::size_t a, std::size_t b) {
      return col[a] != col[b] ? col[a] < col[b] : a < b;
    });
  }

  DecisionTree tree;
  struct Work {
    int node;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Work> stack;
  tree.nodes_.emplace_back();
  stack.push_back({0, 0, rows.size()});

  std::vector<char> goes_left(train.samples(), 0);
  std::vector<std::size_t> buffer;
  std::vector<std::size_t> left_counts(n_classes);
  std::vector<std::size_t> right_counts(n_classes);

  while (!stack.empty()) {
    const Work w = stack.back();
    stack.pop_back();
    const std::size_t n = w.end - w.begin;

    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t i = w.begin; i < w.end; ++i) ++counts[static_cast<std::size_t>(labels[sorted[0][i]])];
    {
      Node& node = tree.nodes_[static_cast<std::size_t>(w.node)];
      node.class_counts = counts;
      node.prediction = majority(counts);
    }
    const std::size_t present = static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
    if (n < 2 || present < 2) continue;

    Split best;
    for (std::size_t s = 0; s < features.size(); ++s) {
      const auto col = train.column(features[s]);
      std::fill(left_counts.begin(), left_counts.end(), 0);
      right_counts = counts;
      Wide sum_left = 0;
      Wide sum_right = 0;
      for (std::size_t c : counts) sum_right += static_cast<Wide>(c) * static_cast<Wide>(c);
      for (std::size_t i = w.begin; i + 1 < w.end; ++i) {
        const std::size_t row = sorted[s][i];
        const auto c = static_cast<std::size_t>(labels[row]);
        sum_left += 2 * static_cast<Wide>(left_counts[c]) + 1;
        ++left_counts[c];
        sum_right -= 2 * static_cast<Wide>(right_counts[c]) - 1;
        --right_counts[c];
        const double v = col[row];
        const double next = col[sorted[s][i + 1]];
        if (v == next) continue;
        const auto n_left = static_cast<Wide>(i + 1 - w.begin);
        const auto n_right = static_cast<Wide>(w.end - i - 1);
        const Wide num = sum_left * n_right + sum_right * n_left;
        const Wide den = n_left * n_right;
        if (!best.found || num * best.den > best.num * den) {
          best = {true, s, split_point(v, next), num, den};
        }
      }
    }
    if (!best.found) continue;

    const auto col = train.column(features[best.feature_slot]);
    std::size_t n_left = 0;
    for (std::size_t i = w.begin; i < w.end; ++i) {
      const std::size_t row = sorted[0][i];
      goes_left[row] = col[row] <= best.threshold ? 1 : 0;
      n_left += static_cast<std::size_t>(goes_left[row]);
    }
    for (auto& list : sorted) {
      buffer.clear();
      std::size_t out = w.begin;
      for (std::size_t i = w.begin; i < w.end; ++i) {
        if (goes_left[list[i]]) {
          list[out++] = list[i];
        } else {
          buffer.push_back(list[i]);
        }
      }
      std::copy(buffer.begin(), buffer.end(), list.begin() + static_cast<std::ptrdiff_t>(out));
    }

    const int left_id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    const int right_id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    Node& node = tree.nodes_[static_cast<std::size_t>(w.node)];
    node.feature = static_cast<int>(features[best.feature_slot]);
    node.threshold = best.threshold;
    node.left = left_id;
    node.right = right_id;
    stack.push_back({right_id, w.begin + n_left, w.end});
    stack.push_back({left_id, w.begin, w.begin + n_left});
  }
  return tree;
}

int DecisionTree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const Node& n = nodes_[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes_[i].prediction;
}

int DecisionTree::predict(const LabeledFeatureMatrix& m, std::size_t row) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const Node& n = nodes_[i];
    const auto f = static_cast<std::size_t>(n.feature);
    i = static_cast<std::size_t>(m.at(row, f) <= n.threshold ? n.left : n.right);
  }
  return nodes_[i].prediction;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

DecisionTree tree_fit(const LabeledFeatureMatrix& train) {
  const auto counts = train.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
    raise(ErrorKind::SingleClass, "training data holds a single class");
  }
  if (train.samples() < 2) raise(ErrorKind::DegenerateInput, "tree needs at least 2 samples");
  return DecisionTree::grow(train, {}, {});
}

// ---------------------------------------------------------------------------
// Evaluation

std::size_t fold_count(const LabeledFeatureMatrix& matrix) {
  const auto counts = matrix.class_counts();
  std::size_t smallest = 0;
  std::size_t present = 0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    smallest = present == 0 ? c : std::min(smallest, c);
    ++present;
  }
  if (present < 2) raise(ErrorKind::SingleClass, "fold count needs at least 2 classes");
  return std::min<std::size_t>(10, std::max<std::size_t>(2, smallest));
}

std::vector<std::size_t> stratified_folds(std::span<const int> class_ids, std::size_t n_classes,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds == 0) raise(ErrorKind::InvalidArgument, "need at least one fold");
  std::vector<std::vector<std::size_t>> members(n_classes);
  for (std::size_t i = 0; i < class_ids.size(); ++i) members[static_cast<std::size_t>(class_ids[i])].push_back(i);
  Rng rng(seed);
  std::vector<std::size_t> fold_of(class_ids.size(), 0);
  std::size_t offset = 0;
  for (auto& group : members) {
    rng.shuffle(group);
    for (std::size_t i = 0; i < group.size(); ++i) fold_of[group[i]] = (offset + i) % folds;
    offset = (offset + group.size()) % folds;
  }
  return fold_of;
}

double balanced_accuracy(std::span<const int> y, std::span<const int> yhat) {
  if (y.size() != yhat.size()) raise(ErrorKind::LengthMismatch, "label sequences differ in length");
  if (y.empty()) raise(ErrorKind::EmptyInput, "no labels");
  std::map<int, std::size_t> counts;
  for (int v : y) ++counts[v];
  double hit = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = 1.0 / static_cast<double>(counts[y[i]]);
    total += w;
    if (y[i] == yhat[i]) hit += w;
  }
  return hit / total;
}

double unbalanced_accuracy(std::span<const int> y, std::span<const int> yhat) {
  if (y.size() != yhat.size()) raise(ErrorKind::LengthMismatch, "label sequences differ in length");
  if (y.empty()) raise(ErrorKind::EmptyInput, "no labels");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hit += y[i] == yhat[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(y.size());
}

CvResult cross_validate(const LabeledFeatureMatrix& matrix, std::span<const std::size_t> features,
                        std::uint64_t seed) {
  const std::size_t k = fold_count(matrix);
  const auto labels = matrix.class_ids();
  const std::vector<std::size_t> fold_of = stratified_folds(labels, matrix.classes(), k, seed);

  CvResult result{0.0, {}};
  std::vector<std::size_t> train;
  std::vector<int> y;
  std::vector<int> yhat;
  for (std::size_t fold = 0; fold < k; ++fold) {
    train.clear();
    y.clear();
    yhat.clear();
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] != fold) train.push_back(i);
    }
    const DecisionTree tree = DecisionTree::grow(matrix, train, features);
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] != fold) continue;
      y.push_back(labels[i]);
      yhat.push_back(tree.predict(matrix, i));
    }
    result.fold_accuracies.push_back(balanced_accuracy(y, yhat));
  }
  double sum = 0.0;
  for (double a : result.fold_accuracies) sum += a;
  result.mean = sum / static_cast<double>(k);
  return result;
}

ForwardSelection sfs_top2(const LabeledFeatureMatrix& matrix, std::uint64_t seed) {
  if (matrix.features() < 2) raise(ErrorKind::InvalidArgument, "forward selection needs at least 2 features");
  ForwardSelection sel{0, 0, -1.0, -1.0};
  for (std::size_t f = 0; f < matrix.features(); ++f) {
    const std::size_t cols[] = {f};
    const double acc = cross_validate(matrix, cols, seed).mean;
    if (acc > sel.first_accuracy) {
      sel.first = f;
      sel.first_accuracy = acc;
    }
  }
  for (std::size_t f = 0; f < matrix.features(); ++f) {
    if (f == sel.first) continue;
    const std::size_t cols[] = {sel.first, f};
    const double acc = cross_validate(matrix, cols, seed).mean;
    if (acc > sel.accuracy) {
      sel.second = f;
      sel.accuracy = acc;
    }
  }
  return sel;
}

double total_balanced(const std::vector<std::vector<double>>& fold_accuracies) {
  if (fold_accuracies.empty()) raise(ErrorKind::EmptyInput, "no tasks");
  double sum = 0.0;
  for (const auto& task : fold_accuracies) {
    if (task.empty()) raise(ErrorKind::EmptyInput, "task without folds");
    double t = 0.0;
    for (double a : task) t += a;
    sum += t / static_cast<double>(task.size());
  }
  return sum / static_cast<double>(fold_accuracies.size());
}

double total_unbalanced(std::span<const double> per_task) {
  if (per_task.empty()) raise(ErrorKind::EmptyInput, "no tasks");
  double sum = 0.0;
  for (double a : per_task) sum += a;
  return sum / static_cast<double>(per_task.size());
}

std::vector<double> marker_fill_values(std::span<const FeatureVector> reference) {
  std::vector<double> fill(kFeatureCount, 0.0);
  std::vector<double> finite;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    finite.clear();
    for (const auto& v : reference) {
      if (v[i].has_value()) finite.push_back(v[i].value());
    }
    if (!finite.empty()) fill[i] = median(finite);
  }
  return fill;
}

std::vector<std::vector<double>> impute_markers(std::span<const FeatureVector> vectors, std::span<const double> fill) {
  if (fill.size() != kFeatureCount) raise(ErrorKind::LengthMismatch, "one fill value per feature expected");
  std::vector<std::vector<double>> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    std::vector<double> row(kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i) row[i] = v[i].has_value() ? v[i].value() : fill[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tscanon
