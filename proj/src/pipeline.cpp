#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"
#include "parallel.hpp"
#include "tscanon/selector.hpp"

namespace tscanon {

namespace {

using nlohmann::json;

constexpr std::size_t kMinRepeats = 100;

[[noreturn]] void rethrow_in_stage(const Error& e, const std::string& where) {
  throw Error(e.kind(), where + ": " + e.what(), e.index());
}

const char* to_string(PValueMode m) { return m == PValueMode::Gaussian ? "gaussian" : "empirical"; }
const char* to_string(RepresentativeMode m) {
  return m == RepresentativeMode::BestScore ? "best_score" : "curated_list";
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["repeats"] = c.repeats;
  j["alpha"] = c.alpha;
  j["gamma"] = c.gamma;
  j["beta"] = c.beta ? json(*c.beta) : json(nullptr);
  j["beta_range"] = c.beta_range ? json(*c.beta_range) : json(nullptr);
  j["seed"] = c.seed;
  j["special_threshold"] = c.special_threshold;
  j["pvalue_mode"] = to_string(c.pvalue_mode);
  j["representatives"] = to_string(c.representatives);
  j["curated"] = c.curated;
  return j;
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct TaskLabels {
  std::vector<int> ids;
  std::vector<std::string> names;
};

TaskLabels dense_labels(const std::vector<std::string>& labels) {
  std::map<std::string, int> ids;
  for (const auto& l : labels) ids.emplace(l, 0);
  TaskLabels out;
  int next = 0;
  for (auto& [name, id] : ids) {
    id = next++;
    out.names.push_back(name);
  }
  for (const auto& l : labels) out.ids.push_back(ids.at(l));
  return out;
}

struct Cell {
  std::optional<double> accuracy;
  std::optional<double> pvalue;
  std::optional<Error> failure;
};

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(ErrorKind::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) raise(ErrorKind::InvalidArgument, "config must be a JSON object");
  PipelineConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "repeats") {
        c.repeats = v.get<std::size_t>();
      } else if (key == "alpha") {
        c.alpha = v.get<double>();
      } else if (key == "gamma") {
        c.gamma = v.get<double>();
      } else if (key == "beta") {
        if (!v.is_null()) c.beta = v.get<std::size_t>();
      } else if (key == "beta_range") {
        if (!v.is_null()) c.beta_range = v.get<std::vector<std::size_t>>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "special_threshold") {
        c.special_threshold = v.get<double>();
      } else if (key == "pvalue_mode") {
        const auto s = v.get<std::string>();
        if (s == "gaussian") {
          c.pvalue_mode = PValueMode::Gaussian;
        } else if (s == "empirical") {
          c.pvalue_mode = PValueMode::Empirical;
        } else {
          raise(ErrorKind::InvalidArgument, "pvalue_mode must be gaussian or empirical");
        }
      } else if (key == "representatives") {
        const auto s = v.get<std::string>();
        if (s == "best_score") {
          c.representatives = RepresentativeMode::BestScore;
        } else if (s == "curated_list") {
          c.representatives = RepresentativeMode::CuratedList;
        } else {
          raise(ErrorKind::InvalidArgument, "representatives must be best_score or curated_list");
        }
      } else if (key == "curated") {
        c.curated = v.get<std::vector<std::string>>();
      } else {
        raise(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    raise(ErrorKind::InvalidArgument, std::string("config value has the wrong type: ") + e.what());
  }
  if (c.beta_range && (c.beta_range->size() < 2 || c.beta_range->size() > 3)) {
    raise(ErrorKind::InvalidArgument, "beta_range must be [lo, hi] or [lo, hi, step]");
  }
  return c;
}

std::string pipeline_config_json(const PipelineConfig& config) { return config_to_json(config).dump(2); }

PipelineResult run_pipeline(std::span<const FeatureTask> tasks, const std::vector<std::string>& feature_names,
                            const PipelineConfig& config) {
  const std::size_t n_features = feature_names.size();
  const std::size_t n_tasks = tasks.size();
  if (n_tasks == 0) raise(ErrorKind::EmptyInput, "pipeline needs at least one task");
  if (n_features < 2) raise(ErrorKind::InvalidArgument, "pipeline needs at least two features");
  if (config.repeats < kMinRepeats) raise(ErrorKind::InvalidArgument, "repeats must be at least 100");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) raise(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  if (!(config.gamma > 0.0)) raise(ErrorKind::InvalidArgument, "gamma must be positive");

  PipelineResult out;
  out.feature_names = feature_names;
  std::vector<TaskLabels> labels;
  std::vector<std::vector<bool>> special(n_tasks, std::vector<bool>(n_features, false));
  for (std::size_t t = 0; t < n_tasks; ++t) {
    const FeatureTask& task = tasks[t];
    out.task_names.push_back(task.name);
    if (task.rows.size() != task.labels.size()) {
      raise(ErrorKind::LengthMismatch, "stage A, task " + task.name + ": rows and labels differ in length");
    }
    for (std::size_t r = 0; r < task.rows.size(); ++r) {
      if (task.rows[r].size() != n_features) {
        raise(ErrorKind::LengthMismatch, "stage A, task " + task.name + ": row width differs from feature count", r);
      }
      for (std::size_t f = 0; f < n_features; ++f) {
        if (task.rows[r][f].is_marker()) special[t][f] = true;
      }
    }
    labels.push_back(dense_labels(task.labels));
  }

  // Stage A: special-value prefilter, per-task significance, Fisher + Holm.
  out.prefiltered = special_value_prefilter(special, config.special_threshold);
  const std::size_t n_pre = out.prefiltered.size();
  std::vector<Cell> cells(n_pre * n_tasks);
  detail::parallel_for(cells.size(), config.threads, [&](std::size_t k) {
    const std::size_t f = out.prefiltered[k / n_tasks];
    const std::size_t t = k % n_tasks;
    if (special[t][f]) return;
    try {
      const FeatureTask& task = tasks[t];
      std::vector<double> column;
      column.reserve(task.rows.size());
      for (const auto& row : task.rows) column.push_back(row[f].value());
      const LabeledFeatureMatrix m({std::move(column)}, labels[t].ids, labels[t].names);
      const std::uint64_t task_seed = mix_seed(config.seed, t);
      const double observed = cross_validate(m, {}, task_seed).mean;
      const NullDistribution null = permutation_null(m, 0, config.repeats, task_seed);
      double p = 1.0;
      if (config.pvalue_mode == PValueMode::Empirical) {
        p = empirical_pvalue(null, observed);
      } else {
        try {
          p = gaussian_pvalue(null, observed);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::DegenerateNull) throw;
          p = observed <= mean(null.shuffled_accuracies) ? 1.0 : 0.0;
        }
      }
      cells[k].accuracy = observed;
      cells[k].pvalue = clamp_pvalue(p);
    } catch (const Error& e) {
      cells[k].failure = e;
    }
  });
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].failure) {
      rethrow_in_stage(*cells[k].failure, "stage A, task " + tasks[k % n_tasks].name + ", feature " +
                                              feature_names[out.prefiltered[k / n_tasks]]);
    }
  }

  out.accuracies.feature_names = feature_names;
  out.accuracies.task_names = out.task_names;
  out.accuracies.values.assign(n_features, std::vector<std::optional<double>>(n_tasks));
  out.task_pvalues.assign(n_features, std::vector<std::optional<double>>(n_tasks));
  out.combined_pvalues.assign(n_features, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> family;
  for (std::size_t i = 0; i < n_pre; ++i) {
    const std::size_t f = out.prefiltered[i];
    std::vector<double> ps;
    for (std::size_t t = 0; t < n_tasks; ++t) {
      const Cell& c = cells[i * n_tasks + t];
      out.accuracies.values[f][t] = c.accuracy;
      out.task_pvalues[f][t] = c.pvalue;
      if (c.pvalue) ps.push_back(*c.pvalue);
    }
    out.combined_pvalues[f] = ps.empty() ? 1.0 : fisher_combine(ps);
    family.push_back(out.combined_pvalues[f]);
  }
  const std::vector<bool> reject = holm_bonferroni(family, config.alpha);
  for (std::size_t i = 0; i < n_pre; ++i) {
    if (reject[i]) out.significant.push_back(out.prefiltered[i]);
  }

  // Stage B: normalise over significant features, combine, threshold.
  if (!out.significant.empty()) {
    TaskResultMatrix sig = out.accuracies.rows(out.significant);
    std::vector<std::size_t> live_tasks;
    for (std::size_t t = 0; t < n_tasks; ++t) {
      if (std::any_of(sig.values.begin(), sig.values.end(), [&](const auto& row) { return row[t].has_value(); })) {
        live_tasks.push_back(t);
      }
    }
    TaskResultMatrix trimmed;
    trimmed.feature_names = sig.feature_names;
    for (std::size_t t : live_tasks) trimmed.task_names.push_back(sig.task_names[t]);
    for (const auto& row : sig.values) {
      std::vector<std::optional<double>> r;
      for (std::size_t t : live_tasks) r.push_back(row[t]);
      trimmed.values.push_back(std::move(r));
    }
    try {
      out.normalized = normalize_accuracies(trimmed);
      out.scores = combine_scores(out.normalized);
    } catch (const Error& e) {
      rethrow_in_stage(e, "stage B");
    }

    std::vector<std::size_t> keep;
    if (config.beta) {
      keep = top_beta(out.scores, *config.beta);
    } else {
      if (out.scores.size() >= 2) keep = threshold_top(out.scores);
      // Nothing clears the bar when the top scores are tied or there is a
      // single score; keep the features sharing the best score instead.
      if (keep.empty() && !out.scores.empty()) {
        const double best = *std::max_element(out.scores.begin(), out.scores.end());
        for (std::size_t k = 0; k < out.scores.size(); ++k) {
          if (out.scores[k] == best) keep.push_back(k);
        }
      }
    }
    for (std::size_t k : keep) out.retained.push_back(out.significant[k]);

    // Stage C: correlation distance, complete linkage, representatives.
    try {
      out.distances = performance_correlation_distance(out.normalized.rows(keep), DistancePolicy::Lenient);
      out.clusters = complete_linkage_cluster(out.distances, config.gamma);
      std::vector<double> kept_scores;
      std::vector<std::string> kept_names;
      for (std::size_t k : keep) {
        kept_scores.push_back(out.scores[k]);
        kept_names.push_back(out.normalized.feature_names[k]);
      }
      for (std::size_t r : select_representatives(out.clusters, kept_scores, config.representatives, kept_names,
                                                  config.curated)) {
        out.canonical.push_back(out.retained[r]);
      }
      if (config.beta_range) {
        const auto& br = *config.beta_range;
        const std::size_t step = br.size() == 3 ? std::max<std::size_t>(br[2], 1) : std::max<std::size_t>(br[0], 1);
        for (std::size_t beta = br[0]; beta <= br[1]; beta += step) {
          const auto top = top_beta(out.scores, beta);
          const auto d = performance_correlation_distance(out.normalized.rows(top), DistancePolicy::Lenient);
          out.beta_sweep.push_back({beta, complete_linkage_cluster(d, config.gamma).members.size()});
          if (top.size() == out.scores.size()) break;
        }
      }
    } catch (const Error& e) {
      rethrow_in_stage(e, "stage C");
    }
  }

  json result;
  result["combined_pvalues"] = json::array();
  for (double p : out.combined_pvalues) result["combined_pvalues"].push_back(finite_or_null(p));
  result["accuracies"] = json::array();
  for (const auto& row : out.accuracies.values) {
    json r = json::array();
    for (const auto& v : row) r.push_back(optional_to_json(v));
    result["accuracies"].push_back(r);
  }
  result["scores"] = out.scores;
  result["retained"] = out.retained;
  result["clusters"] = out.clusters.members;
  result["canonical"] = out.canonical;

  json prov;
  prov["seed"] = config.seed;
  prov["config"] = config_to_json(config);
  prov["input"] = {{"features", n_features}, {"tasks", out.task_names}};
  prov["stages"] = {
      {"prefilter_retained", out.prefiltered.size()},
      {"significant", out.significant.size()},
      {"performance_retained", out.retained.size()},
      {"clusters", out.clusters.members.size()},
  };
  json canonical_names = json::array();
  for (std::size_t f : out.canonical) canonical_names.push_back(feature_names[f]);
  prov["canonical"] = canonical_names;
  prov["result_hash"] = fnv1a_hex(result.dump());
  out.provenance = prov.dump(2);
  return out;
}

}  // namespace tscanon
