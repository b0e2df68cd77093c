#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tscanon/core.hpp"
#include "tscanon/features.hpp"

namespace tscanon {

struct ClassifiedDataset {
  std::string name;
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;
  /// Set when loaded from a _TRAIN/_TEST pair; true marks training rows.
  std::optional<std::vector<bool>> is_train;
};

/// One series per line: label, then samples separated by tabs, commas or
/// whitespace (detected from the first data line). Blank lines are skipped.
/// Throws IoFailure, EmptyFile or MalformedLine(line number, 1-based).
ClassifiedDataset load_ucr_tsv(const std::string& path);

/// Loads `path` and, if its name contains _TRAIN or _TEST and the partner file
/// exists, the partner too. Training rows come first.
ClassifiedDataset load_ucr_split(const std::string& path);

/// Training and test halves of a split dataset.
std::pair<ClassifiedDataset, ClassifiedDataset> split_train_test(const ClassifiedDataset& data);

enum class TableFormat { Csv, Json };

TableFormat table_format_from_string(const std::string& s);

/// Feature vectors plus optional per-row labels.
struct FeatureTable {
  std::vector<FeatureVector> vectors;
  std::vector<std::string> labels;
};

/// csv: optional `label` column, 22 feature columns, `flags` column listing
/// markers as name=Kind separated by ';'. Markers are empty cells.
/// json: array of {label?, features: {name: value|null}, flags: {name: Kind}}.
std::string format_feature_table(const FeatureTable& table, TableFormat format);
void write_feature_table(const FeatureTable& table, const std::string& path, TableFormat format);

FeatureTable parse_feature_table(const std::string& text, TableFormat format);
FeatureTable read_feature_table(const std::string& path, TableFormat format);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tscanon
