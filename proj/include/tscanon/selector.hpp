#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tscanon/classify.hpp"
#include "tscanon/core.hpp"

namespace tscanon {

/// Features x tasks accuracy table. nullopt marks a NotComputed entry.
struct TaskResultMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::string> task_names;
  std::vector<std::vector<std::optional<double>>> values;

  std::size_t features() const noexcept { return values.size(); }
  std::size_t tasks() const noexcept { return task_names.size(); }
  /// Throws InvalidArgument on shape errors or entries outside [0, inf).
  void validate() const;
  /// Only the given rows, in the given order.
  TaskResultMatrix rows(std::span<const std::size_t> keep) const;
};

struct NullDistribution {
  std::vector<double> shuffled_accuracies;
  std::size_t repeats = 0;
};

struct ClusterAssignment {
  std::vector<std::size_t> cluster_of;
  /// Members of each cluster, ascending; clusters ordered by smallest member.
  std::vector<std::vector<std::size_t>> members;
  double gamma = 0.2;
};

enum class RepresentativeMode { BestScore, CuratedList };

/// `special[t][f]` is true when feature f produced a marker on at least one
/// series of task t. Keeps features special in at most `threshold` of tasks.
std::vector<std::size_t> special_value_prefilter(const std::vector<std::vector<bool>>& special,
                                                 double threshold = 0.8);

/// Mean balanced CV accuracy of one feature under `repeats` label shuffles.
/// Repeat r draws from seed ^ r, so results do not depend on `threads`.
NullDistribution permutation_null(const LabeledFeatureMatrix& matrix, std::size_t feature,
                                  std::size_t repeats = 1000, std::uint64_t seed = 0, unsigned threads = 1);

/// Upper-tail probability of `observed` under a Gaussian fitted to the null.
/// Throws DegenerateNull when the null has zero spread.
double gaussian_pvalue(const NullDistribution& null, double observed);
/// (1 + #{null >= observed}) / (repeats + 1).
double empirical_pvalue(const NullDistribution& null, double observed);

/// Floor applied to zero p-values before taking logs.
inline constexpr double kMinPValue = 1e-300;
double clamp_pvalue(double p);

/// Fisher's method: chi2_sf(-2 sum ln p, 2M). Throws ZeroPValue on p = 0.
double fisher_combine(std::span<const double> pvalues);

/// Step-down Holm-Bonferroni rejection flags in input order.
std::vector<bool> holm_bonferroni(std::span<const double> pvalues, double alpha = 0.05);

/// Divides every entry by its task column mean over computed entries.
TaskResultMatrix normalize_accuracies(const TaskResultMatrix& matrix);

/// Row means over computed entries.
std::vector<double> combine_scores(const TaskResultMatrix& norm);

/// Indices with score > mean + sample std.
std::vector<std::size_t> threshold_top(std::span<const double> scores);
/// The `beta` highest scores, ties to the lower index; returned ascending.
std::vector<std::size_t> top_beta(std::span<const double> scores, std::size_t beta);

enum class DistancePolicy {
  /// Throws DegenerateInput below 3 shared tasks and ConstantRow on zero variance.
  Strict,
  /// Such pairs get distance 0 if identical over shared tasks, 1 otherwise.
  Lenient,
};

/// 1 - Pearson correlation over pairwise-complete tasks.
std::vector<std::vector<double>> performance_correlation_distance(const TaskResultMatrix& norm,
                                                                  DistancePolicy policy = DistancePolicy::Strict);

/// Agglomerative complete linkage; clusters merge while the linkage height is
/// strictly below gamma. Equal heights merge the lexicographically first pair.
ClusterAssignment complete_linkage_cluster(const std::vector<std::vector<double>>& distances, double gamma = 0.2);

/// One index per cluster. CuratedList takes one name per cluster (in cluster
/// order) and checks it belongs to that cluster.
std::vector<std::size_t> select_representatives(const ClusterAssignment& assignment, std::span<const double> scores,
                                                RepresentativeMode mode = RepresentativeMode::BestScore,
                                                std::span<const std::string> names = {},
                                                std::span<const std::string> curated = {});

// ---------------------------------------------------------------------------
// Pipeline

enum class PValueMode { Gaussian, Empirical };

struct PipelineConfig {
  std::size_t repeats = 1000;
  double alpha = 0.05;
  double gamma = 0.2;
  /// Explicit top-beta mode; unset means the mean + 1 sigma threshold.
  std::optional<std::size_t> beta;
  /// Optional sweep (lo, hi, step) reporting cluster counts per beta.
  std::optional<std::vector<std::size_t>> beta_range;
  std::uint64_t seed = 0;
  double special_threshold = 0.8;
  PValueMode pvalue_mode = PValueMode::Gaussian;
  RepresentativeMode representatives = RepresentativeMode::BestScore;
  std::vector<std::string> curated;
  unsigned threads = 1;
};

/// Parses the JSON config (keys: repeats, alpha, gamma, beta, beta_range,
/// seed, special_threshold, pvalue_mode, representatives, curated).
PipelineConfig parse_pipeline_config(const std::string& json_text);
std::string pipeline_config_json(const PipelineConfig& config);

/// One classification task: per-series feature values (markers allowed).
struct FeatureTask {
  std::string name;
  std::vector<std::vector<FeatureValue>> rows;
  std::vector<std::string> labels;
};

struct BetaSweepPoint {
  std::size_t beta;
  std::size_t clusters;
};

struct PipelineResult {
  std::vector<std::string> feature_names;
  std::vector<std::string> task_names;
  /// Stage A
  std::vector<std::size_t> prefiltered;
  TaskResultMatrix accuracies;
  std::vector<std::vector<std::optional<double>>> task_pvalues;
  std::vector<double> combined_pvalues;  // per feature; NaN when dropped by the prefilter
  std::vector<std::size_t> significant;
  /// Stage B
  TaskResultMatrix normalized;            // rows follow `significant`
  std::vector<double> scores;             // per significant feature
  std::vector<std::size_t> retained;      // feature indices
  /// Stage C
  std::vector<std::vector<double>> distances;  // over `retained`
  ClusterAssignment clusters;                  // positions within `retained`
  std::vector<std::size_t> canonical;          // feature indices, one per cluster
  std::vector<BetaSweepPoint> beta_sweep;
  std::string provenance;                      // JSON
};

/// Stage A significance testing, stage B performance filtering and stage C
/// redundancy reduction. Errors are rethrown with the stage and task named.
PipelineResult run_pipeline(std::span<const FeatureTask> tasks, const std::vector<std::string>& feature_names,
                            const PipelineConfig& config);

/// FNV-1a 64-bit, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace tscanon
