#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tscanon/bench.hpp"
#include "tscanon/classify.hpp"
#include "tscanon/features.hpp"
#include "tscanon/io.hpp"
#include "tscanon/selector.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tscanon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string input;
  std::string test;
  std::string output = "-";
  std::string format = "csv";
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t repeats = 1000;
  double alpha = 0.05;
  double gamma = 0.2;
  std::vector<std::size_t> lengths;
  std::size_t reps = 3;
};

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(path, text);
  }
}

std::vector<FeatureVector> extract_dataset(const ClassifiedDataset& data, unsigned threads) {
  return extract_many(data.series, threads);
}

std::string class_report(std::uint64_t seed, const std::string& name, std::size_t n_train, std::size_t n_test,
                         double unbalanced, double balanced, const DecisionTree& tree) {
  json j;
  j["seed"] = seed;
  j["dataset"] = name;
  j["train_series"] = n_train;
  j["test_series"] = n_test;
  j["unbalanced_accuracy"] = unbalanced;
  j["balanced_accuracy"] = balanced;
  j["tree"] = {{"depth", tree.depth()}, {"leaves", tree.leaves()}};
  return j.dump(2) + "\n";
}

int cmd_extract(const Options& o) {
  const ClassifiedDataset data = load_ucr_tsv(o.input);
  const TableFormat format = table_format_from_string(o.format);
  FeatureTable table{extract_dataset(data, o.threads), data.labels};
  std::size_t flagged = 0;
  for (const auto& v : table.vectors) {
    flagged += std::any_of(v.entries().begin(), v.entries().end(), [](const FeatureValue& e) { return e.is_marker(); });
  }
  emit(o.output, format_feature_table(table, format));
  std::cerr << "extracted " << table.vectors.size() << " series (" << flagged << " with flagged features), seed "
            << o.seed << "\n";
  return kExitOk;
}

int cmd_classify(const Options& o) {
  ClassifiedDataset train;
  ClassifiedDataset test;
  if (o.test.empty()) {
    const ClassifiedDataset both = load_ucr_split(o.input);
    if (!both.is_train) raise(ErrorKind::InvalidArgument, "no --test file given and no _TRAIN/_TEST partner found");
    std::tie(train, test) = split_train_test(both);
  } else {
    train = load_ucr_tsv(o.input);
    test = load_ucr_tsv(o.test);
  }
  const std::vector<FeatureVector> ftrain = extract_dataset(train, o.threads);
  const std::vector<FeatureVector> ftest = extract_dataset(test, o.threads);
  const std::vector<double> fill = marker_fill_values(ftrain);
  const LabeledFeatureMatrix mtrain(impute_markers(ftrain, fill), train.labels);
  const DecisionTree tree = tree_fit(mtrain);

  // Test labels unseen in training get fresh ids that no prediction matches.
  std::map<std::string, int> ids;
  for (const auto& n : mtrain.class_names()) ids.emplace(n, static_cast<int>(ids.size()));
  std::vector<int> y;
  std::vector<int> yhat;
  const std::vector<std::vector<double>> rows = impute_markers(ftest, fill);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y.push_back(ids.emplace(test.labels[i], static_cast<int>(ids.size())).first->second);
    yhat.push_back(tree.predict(rows[i]));
  }
  emit(o.output, class_report(o.seed, train.name, train.series.size(), test.series.size(), unbalanced_accuracy(y, yhat),
                              balanced_accuracy(y, yhat), tree));
  return kExitOk;
}

bool is_feature_table(const fs::path& p) { return p.extension() == ".csv" || p.extension() == ".json"; }

std::vector<FeatureTask> load_task_directory(const std::string& dir, unsigned threads) {
  if (!fs::is_directory(dir)) raise(ErrorKind::IoFailure, "'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<FeatureTask> tasks;
  for (const auto& path : files) {
    const std::string file = path.filename().string();
    if (file.empty() || file.front() == '.') continue;
    if (const auto pos = file.rfind("_TEST"); pos != std::string::npos) {
      const std::string partner = file.substr(0, pos) + "_TRAIN" + file.substr(pos + 5);
      if (fs::exists(path.parent_path() / partner)) continue;
    }
    FeatureTask task;
    task.name = path.stem().string();
    if (is_feature_table(path)) {
      FeatureTable table = read_feature_table(path.string(), path.extension() == ".json" ? TableFormat::Json : TableFormat::Csv);
      if (table.labels.empty()) raise(ErrorKind::InvalidArgument, "feature table '" + file + "' has no label column");
      task.labels = std::move(table.labels);
      for (auto& v : table.vectors) task.rows.push_back(v.entries());
    } else {
      const ClassifiedDataset data = load_ucr_split(path.string());
      task.name = data.name;
      task.labels = data.labels;
      for (const auto& v : extract_dataset(data, threads)) task.rows.push_back(v.entries());
    }
    tasks.push_back(std::move(task));
  }
  if (tasks.empty()) raise(ErrorKind::EmptyInput, "no task files in '" + dir + "'");
  return tasks;
}

int cmd_select(const Options& o, const CLI::App& sub) {
  PipelineConfig config;
  if (!o.config.empty()) config = parse_pipeline_config(read_text_file(o.config));
  if (sub.count("--seed") > 0 || o.config.empty()) config.seed = o.seed;
  if (sub.count("--repeats") > 0 || o.config.empty()) config.repeats = o.repeats;
  if (sub.count("--alpha") > 0 || o.config.empty()) config.alpha = o.alpha;
  if (sub.count("--gamma") > 0 || o.config.empty()) config.gamma = o.gamma;
  config.threads = o.threads;

  const std::vector<FeatureTask> tasks = load_task_directory(o.input, o.threads);
  std::vector<std::string> names;
  for (auto n : feature_names()) names.emplace_back(n);
  const PipelineResult r = run_pipeline(tasks, names, config);

  json j;
  j["seed"] = config.seed;
  auto name_list = [&](const std::vector<std::size_t>& idx) {
    json a = json::array();
    for (std::size_t i : idx) a.push_back(names[i]);
    return a;
  };
  j["canonical"] = name_list(r.canonical);
  j["significant"] = name_list(r.significant);
  j["retained"] = name_list(r.retained);
  json clusters = json::array();
  for (const auto& members : r.clusters.members) {
    json c = json::array();
    for (std::size_t m : members) c.push_back(names[r.retained[m]]);
    clusters.push_back(c);
  }
  j["clusters"] = clusters;
  json scores = json::object();
  for (std::size_t k = 0; k < r.significant.size(); ++k) scores[names[r.significant[k]]] = r.scores[k];
  j["scores"] = scores;
  json pvalues = json::object();
  for (std::size_t f : r.prefiltered) pvalues[names[f]] = r.combined_pvalues[f];
  j["combined_pvalues"] = pvalues;
  if (!r.beta_sweep.empty()) {
    json sweep = json::array();
    for (const auto& p : r.beta_sweep) sweep.push_back({{"beta", p.beta}, {"clusters", p.clusters}});
    j["beta_sweep"] = sweep;
  }
  j["provenance"] = json::parse(r.provenance);
  emit(o.output, j.dump(2) + "\n");
  return kExitOk;
}

std::vector<NamedSeries> bench_corpus(const Options& o, std::size_t longest) {
  if (o.input.empty()) return synthetic_bench_corpus(longest, o.seed);
  std::vector<NamedSeries> out;
  const ClassifiedDataset data = load_ucr_tsv(o.input);
  for (std::size_t i = 0; i < data.series.size(); ++i) out.push_back({data.name + "_" + std::to_string(i), data.series[i]});
  return out;
}

int cmd_bench(const Options& o) {
  std::vector<std::size_t> lengths = o.lengths.empty() ? default_bench_lengths() : o.lengths;
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  if (o.reps == 1) std::cerr << "warning: --reps 1 gives a single noisy reading per point\n";
  const std::vector<NamedSeries> corpus = bench_corpus(o, lengths.back());
  const std::vector<BenchRecord> records = time_extract(corpus, lengths, o.reps);

  std::ostringstream table;
  table << "series_id,length,seconds\n";
  for (const auto& r : records) table << r.series_id << ',' << r.length << ',' << format_double(r.seconds) << '\n';
  emit(o.output, table.str());

  json summary;
  summary["seed"] = o.seed;
  summary["series"] = corpus.size();
  summary["lengths"] = lengths;
  summary["reps"] = o.reps;
  try {
    const ScalingFit fit = fit_scaling(records);
    summary["exponent"] = fit.exponent;
    summary["prefactor"] = fit.prefactor;
    summary["r_squared"] = fit.r_squared;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateInput) throw;
    summary["exponent"] = nullptr;
    summary["note"] = "fewer than 5 distinct lengths; no scaling fit";
  }
  std::cerr << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_project2d(const Options& o) {
  const ClassifiedDataset data = load_ucr_tsv(o.input);
  const std::vector<FeatureVector> features = extract_dataset(data, o.threads);
  const std::vector<std::vector<double>> rows = impute_markers(features, marker_fill_values(features));
  const LabeledFeatureMatrix m(rows, data.labels);
  const ForwardSelection sel = sfs_top2(m, o.seed);
  const auto names = feature_names();
  const std::string first(names[sel.first]);
  const std::string second(names[sel.second]);

  if (table_format_from_string(o.format) == TableFormat::Json) {
    json j;
    j["seed"] = o.seed;
    j["feature1"] = first;
    j["feature2"] = second;
    j["accuracy_feature1"] = sel.first_accuracy;
    j["accuracy_pair"] = sel.accuracy;
    json pts = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      pts.push_back({{"feature1", rows[i][sel.first]}, {"feature2", rows[i][sel.second]}, {"label", data.labels[i]}});
    }
    j["points"] = pts;
    emit(o.output, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "# seed=" << o.seed << " feature1=" << first << " feature2=" << second
        << " accuracy_feature1=" << format_double(sel.first_accuracy) << " accuracy_pair=" << format_double(sel.accuracy)
        << '\n';
    out << "feature1,feature2,label\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << format_double(rows[i][sel.first]) << ',' << format_double(rows[i][sel.second]) << ','
          << data.labels[i] << '\n';
    }
    emit(o.output, out.str());
  }
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput:
    case ErrorKind::NotComputable:
    case ErrorKind::DegenerateNull:
    case ErrorKind::ZeroPValue:
    case ErrorKind::ZeroColumnMean:
    case ErrorKind::AllMarkersRow:
    case ErrorKind::ConstantRow:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tscanon: canonical time-series features, classification and feature selection"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed, echoed in outputs")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker threads for extraction")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--output,-o", o.output, "Output path, - for stdout")->capture_default_str();
  };

  CLI::App* extract = app.add_subcommand("extract", "Compute the 22 features for every series of a dataset file");
  extract->add_option("--input,-i", o.input, "Dataset file (label then samples per line)")->required();
  extract->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_common(extract);

  CLI::App* classify = app.add_subcommand("classify", "Fit a decision tree on train features and score the test split");
  classify->add_option("--input,-i", o.input, "Training file; its _TEST partner is used when --test is absent")->required();
  classify->add_option("--test", o.test, "Test file");
  add_common(classify);

  CLI::App* select = app.add_subcommand("select", "Run the feature selection pipeline over a directory of tasks");
  select->add_option("--input,-i", o.input, "Directory of dataset files or labelled feature tables")->required();
  select->add_option("--config", o.config, "JSON pipeline config");
  select->add_option("--repeats", o.repeats, "Permutation repeats")->check(CLI::Range(100, 1000000))->capture_default_str();
  select->add_option("--alpha", o.alpha, "Family-wise significance level")->capture_default_str();
  select->add_option("--gamma", o.gamma, "Clustering cut height")->capture_default_str();
  add_common(select);

  CLI::App* bench = app.add_subcommand("bench", "Time feature extraction across series lengths");
  bench->add_option("--input,-i", o.input, "Dataset file to time instead of the synthetic corpus");
  bench->add_option("--lengths", o.lengths, "Series lengths")->delimiter(',')->check(CLI::Range(std::size_t{5}, std::size_t{100000000}));
  bench->add_option("--reps", o.reps, "Repetitions per point (minimum is kept)")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(bench);

  CLI::App* project = app.add_subcommand("project2d", "Pick the best pair of features by forward selection");
  project->add_option("--input,-i", o.input, "Dataset file")->required();
  project->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_common(project);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*extract) return cmd_extract(o);
    if (*classify) return cmd_classify(o);
    if (*select) return cmd_select(o, *select);
    if (*bench) return cmd_bench(o);
    if (*project) return cmd_project2d(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}
