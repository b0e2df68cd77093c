#include "tscanon/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace tscanon {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum class Delimiter { Tab, Comma, Whitespace };

std::vector<std::string> split_fields(const std::string& line, Delimiter d) {
  std::vector<std::string> out;
  if (d == Delimiter::Whitespace) {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
  }
  const char sep = d == Delimiter::Tab ? '\t' : ',';
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  for (auto& tok : out) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    tok = b == std::string::npos ? std::string() : tok.substr(b, e - b + 1);
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::optional<double> parse_double(const std::string& tok) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return v;
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Splits CSV text into records, honouring double-quoted fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        records.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
      ++line;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) raise(ErrorKind::MalformedLine, "unterminated quoted field", line);
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  return records;
}

std::vector<std::string> name_list() {
  std::vector<std::string> out;
  for (auto n : feature_names()) out.emplace_back(n);
  return out;
}

Marker marker_from_string(const std::string& s, std::size_t line) {
  if (s == to_string(Marker::NotComputable)) return Marker::NotComputable;
  if (s == to_string(Marker::DegenerateInput)) return Marker::DegenerateInput;
  raise(ErrorKind::MalformedLine, "unknown marker '" + s + "'", line);
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoFailure, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) raise(ErrorKind::IoFailure, "read error on '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) raise(ErrorKind::IoFailure, "write error on '" + path + "'");
}

ClassifiedDataset load_ucr_tsv(const std::string& path) {
  if (fs::is_directory(path)) raise(ErrorKind::IoFailure, "'" + path + "' is a directory");
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoFailure, "cannot open '" + path + "' for reading");
  ClassifiedDataset data;
  data.name = fs::path(path).stem().string();
  std::optional<Delimiter> delim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    if (!delim) {
      delim = line.find('\t') != std::string::npos ? Delimiter::Tab
              : line.find(',') != std::string::npos ? Delimiter::Comma
                                                     : Delimiter::Whitespace;
    }
    const std::vector<std::string> fields = split_fields(line, *delim);
    if (fields.size() < 2) raise(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + " has no samples", line_no);
    if (fields[0].empty()) raise(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + " has an empty label", line_no);
    std::vector<double> samples;
    samples.reserve(fields.size() - 1);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto v = parse_double(fields[k]);
      if (!v || !std::isfinite(*v)) {
        raise(ErrorKind::MalformedLine,
              "line " + std::to_string(line_no) + ": '" + fields[k] + "' is not a finite number", line_no);
      }
      samples.push_back(*v);
    }
    data.labels.push_back(fields[0]);
    data.series.emplace_back(std::move(samples));
  }
  if (in.bad()) raise(ErrorKind::IoFailure, "read error on '" + path + "'");
  if (data.series.empty()) raise(ErrorKind::EmptyFile, "'" + path + "' contains no series");
  return data;
}

ClassifiedDataset load_ucr_split(const std::string& path) {
  const fs::path p(path);
  const std::string file = p.filename().string();
  std::string partner;
  bool is_train = false;
  if (auto pos = file.rfind("_TRAIN"); pos != std::string::npos) {
    partner = file.substr(0, pos) + "_TEST" + file.substr(pos + 6);
    is_train = true;
  } else if (auto pos2 = file.rfind("_TEST"); pos2 != std::string::npos) {
    partner = file.substr(0, pos2) + "_TRAIN" + file.substr(pos2 + 5);
  }
  ClassifiedDataset first = load_ucr_tsv(path);
  if (partner.empty() || !fs::exists(p.parent_path() / partner)) return first;
  ClassifiedDataset second = load_ucr_tsv((p.parent_path() / partner).string());
  ClassifiedDataset& train = is_train ? first : second;
  ClassifiedDataset& test = is_train ? second : first;

  ClassifiedDataset out;
  const std::string stem = train.name;
  out.name = stem.substr(0, stem.rfind("_TRAIN"));
  out.is_train = std::vector<bool>();
  for (std::size_t i = 0; i < train.series.size(); ++i) {
    out.series.push_back(std::move(train.series[i]));
    out.labels.push_back(std::move(train.labels[i]));
    out.is_train->push_back(true);
  }
  for (std::size_t i = 0; i < test.series.size(); ++i) {
    out.series.push_back(std::move(test.series[i]));
    out.labels.push_back(std::move(test.labels[i]));
    out.is_train->push_back(false);
  }
  return out;
}

std::pair<ClassifiedDataset, ClassifiedDataset> split_train_test(const ClassifiedDataset& data) {
  if (!data.is_train) raise(ErrorKind::InvalidArgument, "dataset has no train/test split");
  ClassifiedDataset train;
  ClassifiedDataset test;
  train.name = data.name + "_TRAIN";
  test.name = data.name + "_TEST";
  for (std::size_t i = 0; i < data.series.size(); ++i) {
    ClassifiedDataset& dst = (*data.is_train)[i] ? train : test;
    dst.series.push_back(data.series[i]);
    dst.labels.push_back(data.labels[i]);
  }
  return {std::move(train), std::move(test)};
}

TableFormat table_format_from_string(const std::string& s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  raise(ErrorKind::InvalidArgument, "format must be csv or json");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) raise(ErrorKind::InvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

std::string format_feature_table(const FeatureTable& table, TableFormat format) {
  if (table.vectors.empty()) raise(ErrorKind::EmptyInput, "feature table has no rows");
  const bool labelled = !table.labels.empty();
  if (labelled && table.labels.size() != table.vectors.size()) {
    raise(ErrorKind::LengthMismatch, "labels do not match rows");
  }
  const std::vector<std::string> names = name_list();

  if (format == TableFormat::Json) {
    json arr = json::array();
    for (std::size_t r = 0; r < table.vectors.size(); ++r) {
      json rec = json::object();
      if (labelled) rec["label"] = table.labels[r];
      json values = json::object();
      json flags = json::object();
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const FeatureValue& v = table.vectors[r][i];
        if (v.has_value()) {
          values[names[i]] = v.value();
        } else {
          values[names[i]] = nullptr;
          flags[names[i]] = to_string(v.marker());
        }
      }
      rec["features"] = std::move(values);
      rec["flags"] = std::move(flags);
      arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
  }

  std::string out;
  if (labelled) out += "label,";
  for (const auto& n : names) out += n + ",";
  out += "flags\n";
  for (std::size_t r = 0; r < table.vectors.size(); ++r) {
    if (labelled) out += csv_escape(table.labels[r]) + ",";
    std::string flags;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const FeatureValue& v = table.vectors[r][i];
      if (v.has_value()) {
        out += format_double(v.value());
      } else {
        if (!flags.empty()) flags += ';';
        flags += names[i] + "=" + to_string(v.marker());
      }
      out += ',';
    }
    out += flags + "\n";
  }
  return out;
}

void write_feature_table(const FeatureTable& table, const std::string& path, TableFormat format) {
  write_text_file(path, format_feature_table(table, format));
}

FeatureTable parse_feature_table(const std::string& text, TableFormat format) {
  const std::vector<std::string> names = name_list();
  FeatureTable table;

  if (format == TableFormat::Json) {
    json arr;
    try {
      arr = json::parse(text);
    } catch (const json::exception& e) {
      raise(ErrorKind::MalformedLine, std::string("feature table is not valid JSON: ") + e.what(), 1);
    }
    if (!arr.is_array()) raise(ErrorKind::MalformedLine, "feature table must be a JSON array", 1);
    bool labelled = false;
    for (std::size_t r = 0; r < arr.size(); ++r) {
      const json& rec = arr[r];
      try {
        if (r == 0) labelled = rec.contains("label");
        if (labelled != rec.contains("label")) raise(ErrorKind::MalformedLine, "inconsistent label fields", r + 1);
        if (labelled) table.labels.push_back(rec.at("label").get<std::string>());
        const json& values = rec.at("features");
        const json flags = rec.value("flags", json::object());
        std::vector<FeatureValue> entries;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
          const json& v = values.at(names[i]);
          if (v.is_null()) {
            const std::string kind = flags.contains(names[i]) ? flags.at(names[i]).get<std::string>()
                                                               : to_string(Marker::NotComputable);
            entries.emplace_back(marker_from_string(kind, r + 1));
          } else {
            entries.emplace_back(v.get<double>());
          }
        }
        table.vectors.emplace_back(std::move(entries));
      } catch (const json::exception& e) {
        raise(ErrorKind::MalformedLine, std::string("record ") + std::to_string(r + 1) + ": " + e.what(), r + 1);
      }
    }
    if (table.vectors.empty()) raise(ErrorKind::EmptyFile, "feature table has no rows");
    return table;
  }

  const auto records = parse_csv(text);
  if (records.empty()) raise(ErrorKind::EmptyFile, "feature table is empty");
  const auto& header = records.front();
  const bool labelled = !header.empty() && header.front() == "label";
  const std::size_t offset = labelled ? 1 : 0;
  if (header.size() != offset + kFeatureCount + 1 || header.back() != "flags") {
    raise(ErrorKind::MalformedLine, "unexpected feature table header", 1);
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (header[offset + i] != names[i]) raise(ErrorKind::MalformedLine, "unexpected column '" + header[offset + i] + "'", 1);
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t line = r + 1;
    if (rec.size() != header.size()) raise(ErrorKind::MalformedLine, "wrong number of fields", line);
    std::map<std::string, Marker> flags;
    std::istringstream fin(rec.back());
    std::string item;
    while (std::getline(fin, item, ';')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) raise(ErrorKind::MalformedLine, "malformed flag '" + item + "'", line);
      flags[item.substr(0, eq)] = marker_from_string(item.substr(eq + 1), line);
    }
    std::vector<FeatureValue> entries;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const std::string& cell = rec[offset + i];
      const auto flag = flags.find(names[i]);
      if (cell.empty()) {
        if (flag == flags.end()) raise(ErrorKind::MalformedLine, "empty cell without a flag", line);
        entries.emplace_back(flag->second);
      } else {
        const auto v = parse_double(cell);
        if (!v || !std::isfinite(*v)) raise(ErrorKind::MalformedLine, "'" + cell + "' is not a finite number", line);
        if (flag != flags.end()) raise(ErrorKind::MalformedLine, "flagged cell holds a value", line);
        entries.emplace_back(*v);
      }
    }
    if (labelled) table.labels.push_back(rec.front());
    table.vectors.emplace_back(std::move(entries));
  }
  if (table.vectors.empty()) raise(ErrorKind::EmptyFile, "feature table has no rows");
  return table;
}

FeatureTable read_feature_table(const std::string& path, TableFormat format) {
  return parse_feature_table(read_text_file(path), format);
}

}  // namespace tscanon
