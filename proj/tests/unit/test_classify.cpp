#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "support/synthetic.hpp"
#include "tscanon/classify.hpp"

using Catch::Approx;
using tscanon::ErrorKind;
using tscanon::LabeledFeatureMatrix;

namespace {

using Rows = std::vector<std::vector<double>>;
using Labels = std::vector<std::string>;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const tscanon::Error& e) {
    return e.kind();
  }
  FAIL("expected tscanon::Error");
  return ErrorKind::InvalidArgument;
}

LabeledFeatureMatrix class_sizes(const std::vector<std::size_t>& sizes) {
  Rows rows;
  Labels labels;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      rows.push_back({static_cast<double>(rows.size())});
      labels.push_back("c" + std::to_string(c));
    }
  }
  return {rows, labels};
}

double training_accuracy(const tscanon::DecisionTree& tree, const LabeledFeatureMatrix& m) {
  std::vector<int> yhat;
  for (std::size_t r = 0; r < m.samples(); ++r) yhat.push_back(tree.predict(m, r));
  return tscanon::unbalanced_accuracy(m.class_ids(), yhat);
}

// Best training accuracy reachable by a single axis-aligned split.
double best_stump_accuracy(const Rows& rows, const std::vector<int>& y) {
  double best = 0.0;
  for (std::size_t f = 0; f < rows[0].size(); ++f) {
    for (const auto& pivot : rows) {
      for (int left_class : {0, 1}) {
        std::size_t hit = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const int pred = rows[r][f] <= pivot[f] ? left_class : 1 - left_class;
          hit += pred == y[r] ? 1 : 0;
        }
        best = std::max(best, static_cast<double>(hit) / static_cast<double>(rows.size()));
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("labels map to dense ids in sorted order") {
  const LabeledFeatureMatrix m(Rows{{1}, {2}, {3}}, Labels{"b", "a", "b"});
  CHECK(m.class_names() == Labels{"a", "b"});
  CHECK(std::vector<int>(m.class_ids().begin(), m.class_ids().end()) == std::vector<int>{1, 0, 1});
  CHECK(m.class_counts() == std::vector<std::size_t>{1, 2});
  CHECK(kind_of([] { LabeledFeatureMatrix(Rows{{1}, {2, 3}}, Labels{"a", "b"}); }) == ErrorKind::LengthMismatch);
  CHECK(kind_of([] { LabeledFeatureMatrix(Rows{{1}}, Labels{"a", "b"}); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("fold_count follows min(10, max(2, smallest class))") {
  CHECK(tscanon::fold_count(class_sizes({3, 7})) == 3);
  CHECK(tscanon::fold_count(class_sizes({500, 600})) == 10);
  CHECK(tscanon::fold_count(class_sizes({1, 9})) == 2);
  CHECK(kind_of([] { tscanon::fold_count(class_sizes({5})); }) == ErrorKind::SingleClass);
}

TEST_CASE("tree_fit on separable 1-D data") {
  const LabeledFeatureMatrix m(Rows{{0}, {1}, {2}, {3}}, Labels{"A", "A", "B", "B"});
  const auto tree = tscanon::tree_fit(m);
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].threshold > 1.0);
  CHECK(tree.nodes()[0].threshold < 2.0);
  CHECK(training_accuracy(tree, m) == 1.0);
}

TEST_CASE("tree_fit with identical feature values gives a majority stump") {
  const LabeledFeatureMatrix m(Rows{{4}, {4}, {4}, {4}, {4}}, Labels{"x", "y", "y", "x", "y"});
  const auto tree = tscanon::tree_fit(m);
  CHECK(tree.nodes().size() == 1);
  CHECK(tree.depth() == 0);
  CHECK(tree.nodes()[0].prediction == 1);
}

TEST_CASE("tree_fit solves XOR with depth 2") {
  const Rows rows{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const LabeledFeatureMatrix m(rows, Labels{"A", "B", "B", "A"});
  const std::vector<int> y(m.class_ids().begin(), m.class_ids().end());
  CHECK(best_stump_accuracy(rows, y) < 1.0);
  const auto tree = tscanon::tree_fit(m);
  CHECK(tree.depth() == 2);
  CHECK(training_accuracy(tree, m) == 1.0);
}

TEST_CASE("tree_fit rejects a single class") {
  const LabeledFeatureMatrix m(Rows{{1}, {2}}, Labels{"a", "a"});
  CHECK(kind_of([&] { tscanon::tree_fit(m); }) == ErrorKind::SingleClass);
}

TEST_CASE("thresholds lie strictly between observed training values") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    tscanon::Rng rng(seed);
    Rows rows;
    Labels labels;
    for (int i = 0; i < 80; ++i) {
      rows.push_back({std::round(rng.normal() * 4.0), rng.normal(), rng.uniform()});
      labels.push_back(std::to_string(rng.below(3)));
    }
    const LabeledFeatureMatrix m(rows, labels);
    const auto tree = tscanon::tree_fit(m);
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) continue;
      const auto col = m.column(static_cast<std::size_t>(node.feature));
      bool below = false;
      bool above = false;
      for (double v : col) {
        below = below || v < node.threshold;
        above = above || v > node.threshold;
      }
      CHECK(below);
      CHECK(above);
    }
  }
}

TEST_CASE("tree_fit reaches training accuracy 1 on consistent data") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    tscanon::Rng rng(seed + 100);
    Rows rows;
    Labels labels;
    for (int i = 0; i < 60; ++i) {
      rows.push_back({rng.normal(), rng.normal()});
      labels.push_back(std::to_string(rng.below(4)));
    }
    const LabeledFeatureMatrix m(rows, labels);
    CHECK(training_accuracy(tscanon::tree_fit(m), m) == 1.0);
  }
}

TEST_CASE("predictions are invariant to increasing per-feature transforms") {
  tscanon::Rng rng(77);
  Rows rows;
  Rows warped;
  Labels labels;
  for (int i = 0; i < 100; ++i) {
    const double a = rng.normal();
    const double b = rng.normal();
    rows.push_back({a, b});
    warped.push_back({std::exp(a), b * b * b + 3.0 * b});
    labels.push_back(a + 0.5 * b + 0.3 * rng.normal() > 0 ? "p" : "n");
  }
  const LabeledFeatureMatrix m(rows, labels);
  const LabeledFeatureMatrix w(warped, labels);
  const auto t1 = tscanon::tree_fit(m);
  const auto t2 = tscanon::tree_fit(w);
  // Splits depend only on the ordering, so predictions at every training
  // value agree; between values the midpoints may land differently.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    CHECK(t1.predict(rows[r]) == t2.predict(warped[r]));
  }
  CHECK(t1.nodes().size() == t2.nodes().size());
}

TEST_CASE("balanced_accuracy examples") {
  const std::vector<int> y{0, 0, 0, 1};
  const std::vector<int> yhat{0, 0, 1, 1};
  CHECK(tscanon::balanced_accuracy(y, yhat) == Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(tscanon::balanced_accuracy(y, y) == 1.0);
  tscanon::Rng rng(1);
  std::vector<int> truth(10000);
  std::vector<int> guess(10000);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = static_cast<int>(i % 2);
    guess[i] = static_cast<int>(rng.below(2));
  }
  CHECK(tscanon::balanced_accuracy(truth, guess) == Approx(0.5).margin(0.02));
  const std::vector<int> shorter{0};
  CHECK(kind_of([&] { tscanon::balanced_accuracy(y, shorter); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("unbalanced_accuracy examples") {
  const std::vector<int> y{1, 1, 2};
  const std::vector<int> yhat{1, 2, 2};
  CHECK(tscanon::unbalanced_accuracy(y, yhat) == 2.0 / 3.0);
  CHECK(tscanon::unbalanced_accuracy(y, y) == 1.0);
  const std::vector<int> wrong{2, 2, 1};
  CHECK(tscanon::unbalanced_accuracy(y, wrong) == 0.0);
  const std::vector<int> shorter{1};
  CHECK(kind_of([&] { tscanon::unbalanced_accuracy(y, shorter); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("balanced equals unbalanced on exactly balanced classes") {
  tscanon::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> y;
    std::vector<int> yhat;
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < 7; ++i) {
        y.push_back(c);
        yhat.push_back(static_cast<int>(rng.below(3)));
      }
    }
    CHECK(std::abs(tscanon::balanced_accuracy(y, yhat) - tscanon::unbalanced_accuracy(y, yhat)) < 1e-12);
  }
}

TEST_CASE("stratified folds differ by at most one per class") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    tscanon::Rng rng(seed);
    std::vector<int> ids;
    const std::size_t classes = 2 + rng.below(4);
    for (std::size_t i = 0; i < 40 + rng.below(80); ++i) ids.push_back(static_cast<int>(rng.below(classes)));
    for (std::size_t c = 0; c < classes; ++c) ids.push_back(static_cast<int>(c));
    const std::size_t folds = 2 + rng.below(9);
    const auto f = tscanon::stratified_folds(ids, classes, folds, seed);
    REQUIRE(f.size() == ids.size());
    for (std::size_t c = 0; c < classes; ++c) {
      std::vector<std::size_t> per(folds, 0);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == static_cast<int>(c)) ++per[f[i]];
      }
      const auto [mn, mx] = std::minmax_element(per.begin(), per.end());
      CHECK(*mx - *mn <= 1);
    }
    CHECK(f == tscanon::stratified_folds(ids, classes, folds, seed));
  }
}

TEST_CASE("cross_validate examples") {
  Rows rows;
  Labels labels;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({i < 20 ? static_cast<double>(i) : 100.0 + i});
    labels.push_back(i < 20 ? "lo" : "hi");
  }
  const LabeledFeatureMatrix sep(rows, labels);
  for (std::uint64_t seed : {0u, 1u, 99u}) CHECK(tscanon::cross_validate(sep, {}, seed).mean == 1.0);

  tscanon::Rng rng(5);
  Rows noise;
  Labels random_labels;
  for (int i = 0; i < 500; ++i) {
    noise.push_back({rng.normal()});
    random_labels.push_back(i % 2 == 0 ? "a" : "b");
  }
  const LabeledFeatureMatrix shuffled(noise, random_labels);
  const auto cv = tscanon::cross_validate(shuffled, {}, 7);
  CHECK(cv.mean == Approx(0.5).margin(0.07));
  CHECK(cv.fold_accuracies.size() == 10);
  const auto again = tscanon::cross_validate(shuffled, {}, 7);
  CHECK(cv.fold_accuracies == again.fold_accuracies);
}

TEST_CASE("sfs_top2 picks the separating column first") {
  tscanon::Rng rng(9);
  Rows rows;
  Labels labels;
  for (int i = 0; i < 60; ++i) {
    const bool pos = i % 2 == 0;
    rows.push_back({rng.normal(), rng.normal(), (pos ? 5.0 : -5.0) + rng.uniform(), rng.normal()});
    labels.push_back(pos ? "p" : "n");
  }
  const auto sel = tscanon::sfs_top2(LabeledFeatureMatrix(rows, labels), 3);
  CHECK(sel.first == 2);
  CHECK(sel.first_accuracy == 1.0);
}

TEST_CASE("sfs_top2 finds an XOR pair") {
  tscanon::Rng rng(10);
  Rows rows;
  Labels labels;
  for (int i = 0; i < 120; ++i) {
    const int a = static_cast<int>(rng.below(2));
    const int b = static_cast<int>(rng.below(2));
    rows.push_back({rng.normal(), a + 0.1 * rng.uniform(), b + 0.1 * rng.uniform()});
    labels.push_back((a ^ b) != 0 ? "x" : "o");
  }
  const LabeledFeatureMatrix m(rows, labels);
  const auto sel = tscanon::sfs_top2(m, 0);
  double best_single = 0.0;
  for (std::size_t f = 0; f < 3; ++f) {
    const std::vector<std::size_t> one{f};
    best_single = std::max(best_single, tscanon::cross_validate(m, one, 0).mean);
  }
  // Exhaustive search over the second feature given the first.
  double best_pair = -1.0;
  std::size_t best_second = 0;
  for (std::size_t g = 0; g < 3; ++g) {
    if (g == sel.first) continue;
    const std::vector<std::size_t> two{sel.first, g};
    const double acc = tscanon::cross_validate(m, two, 0).mean;
    if (acc > best_pair) {
      best_pair = acc;
      best_second = g;
    }
  }
  CHECK(sel.accuracy > best_single);
  CHECK(sel.accuracy == best_pair);
  CHECK(sel.second == best_second);
  CHECK(std::set<std::size_t>{sel.first, sel.second} == std::set<std::size_t>{1, 2});
}

TEST_CASE("sfs_top2 breaks ties to the lower index") {
  tscanon::Rng rng(11);
  Rows rows;
  Labels labels;
  for (int i = 0; i < 40; ++i) {
    const double v = (i % 2 == 0 ? 3.0 : -3.0) + rng.uniform();
    rows.push_back({rng.normal(), v, v});
    labels.push_back(i % 2 == 0 ? "p" : "n");
  }
  const auto sel = tscanon::sfs_top2(LabeledFeatureMatrix(rows, labels), 0);
  CHECK(sel.first == 1);
}

TEST_CASE("total accuracies") {
  CHECK(tscanon::total_balanced({{0.6, 0.8}}) == Approx(0.7).epsilon(1e-15));
  CHECK(tscanon::total_balanced({{1.0}, {0.0}}) == 0.5);
  const std::vector<double> two{0.5, 1.0};
  CHECK(tscanon::total_unbalanced(two) == 0.75);
  const std::vector<double> one{0.3141};
  CHECK(tscanon::total_unbalanced(one) == 0.3141);

  tscanon::Rng rng(12);
  std::vector<std::vector<double>> table;
  double outer = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> folds;
    double inner = 0.0;
    for (int k = 0; k < 2 + t % 9; ++k) {
      folds.push_back(rng.uniform());
      inner += folds.back();
    }
    outer += inner / static_cast<double>(folds.size());
    table.push_back(folds);
  }
  CHECK(std::abs(tscanon::total_balanced(table) - outer / 20.0) <= 1e-15);

  std::vector<double> tasks(93);
  double sum = 0.0;
  for (double& v : tasks) {
    v = rng.uniform();
    sum += v;
  }
  CHECK(std::abs(tscanon::total_unbalanced(tasks) - sum / 93.0) <= 1e-15);
  CHECK(kind_of([] { tscanon::total_balanced({}); }) == ErrorKind::EmptyInput);
}

TEST_CASE("marker imputation uses column medians") {
  std::vector<tscanon::FeatureValue> a(22, tscanon::FeatureValue(1.0));
  std::vector<tscanon::FeatureValue> b(22, tscanon::FeatureValue(3.0));
  std::vector<tscanon::FeatureValue> c(22, tscanon::FeatureValue(tscanon::Marker::NotComputable));
  c[0] = 10.0;
  const std::vector<tscanon::FeatureVector> vecs{tscanon::FeatureVector(a), tscanon::FeatureVector(b),
                                                 tscanon::FeatureVector(c)};
  const auto fill = tscanon::marker_fill_values(vecs);
  CHECK(fill[0] == 3.0);
  CHECK(fill[1] == 2.0);
  const auto rows = tscanon::impute_markers(vecs, fill);
  CHECK(rows[2][0] == 10.0);
  CHECK(rows[2][5] == 2.0);
  const std::vector<tscanon::FeatureVector> none{tscanon::FeatureVector::filled(tscanon::Marker::DegenerateInput)};
  CHECK(tscanon::marker_fill_values(none)[3] == 0.0);
}

TEST_CASE("rng streams are reproducible") {
  tscanon::Rng a(42);
  tscanon::Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  tscanon::Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.below(7) < 7);
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(tscanon::mix_seed(1, 0) != tscanon::mix_seed(1, 1));
  CHECK(tscanon::mix_seed(1, 0) == tscanon::mix_seed(1, 0));
}
