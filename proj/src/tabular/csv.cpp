// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "posthoc/error.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc {
namespace {

// Reads one RFC-4180 record. Returns false at end of input. `line` tracks the
// physical line number for error messages.
bool ReadRecord(std::istream& in, char delimiter, std::vector<std::string>& fields,
                std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  ++line;
  const std::size_t start_line = line;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  while (true) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      Require(!quoted, ErrorCode::kParse,
              "malformed CSV: unterminated quote starting at line " +
                  std::to_string(start_line));
      fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      Require(field.empty() && !field_was_quoted, ErrorCode::kParse,
              "malformed CSV: stray quote at line " + std::to_string(line));
      quoted = true;
      field_was_quoted = true;
    } else if (ch == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (ch == '\r' && in.peek() == '\n') {
      // CRLF: the '\n' ends the record on the next iteration.
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else {
      Require(!field_was_quoted, ErrorCode::kParse,
              "malformed CSV: text after closing quote at line " + std::to_string(line));
      field.push_back(ch);
    }
  }
}

bool IsMissing(std::string_view cell) { return cell.empty() || cell == "NA"; }

bool ParseReal(std::string_view cell, double& out) {
  while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
  while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return result.ec == std::errc() && result.ptr == cell.data() + cell.size() &&
         std::isfinite(out);
}

std::string NeedsQuoting(const std::string& text, char delimiter) {
  if (text.find_first_of(std::string("\"\r\n") + delimiter) == std::string::npos) {
    return text;
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

std::string FormatReal(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

Dataset ReadCsv(std::istream& in, const FeatureSchema& schema,
                const CsvOptions& options, CsvReport* report) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  Require(ReadRecord(in, options.delimiter, fields, line), ErrorCode::kParse,
          "CSV input is empty (header row required)");
  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    fields[0].erase(0, 3);
  }
  const std::size_t width = fields.size();
  std::map<std::string, std::size_t> header;
  for (std::size_t c = 0; c < fields.size(); ++c) {
    Require(header.emplace(fields[c], c).second, ErrorCode::kParse,
            "duplicate CSV header column '" + fields[c] + "'");
  }
  const auto column_of = [&](const std::string& name) {
    const auto it = header.find(name);
    Require(it != header.end(), ErrorCode::kSchema,
            "CSV header lacks schema column '" + name + "'");
    return it->second;
  };

  const std::size_t p = schema.size();
  std::vector<std::size_t> feature_cols(p);
  for (std::size_t j = 0; j < p; ++j) feature_cols[j] = column_of(schema.feature(j).name);
  struct Extra {
    std::optional<std::size_t> col;
    std::string name;
    std::vector<double> values;
  };
  std::vector<Extra> extras(3);
  const std::optional<std::string>* extra_names[3] = {&schema.target(), &schema.exposure(),
                                                      &schema.weight()};
  for (int e = 0; e < 3; ++e) {
    if (extra_names[e]->has_value()) {
      extras[e].name = **extra_names[e];
      extras[e].col = column_of(extras[e].name);
    }
  }

  std::vector<std::vector<double>> columns(p);
  std::vector<std::vector<bool>> missing(p);
  std::size_t row = 0;
  bool any_missing = false;
  while (ReadRecord(in, options.delimiter, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ++row;
    Require(fields.size() == width, ErrorCode::kParse,
            "malformed CSV row " + std::to_string(row) + " (line " +
                std::to_string(line) + "): expected " + std::to_string(width) +
                " fields, got " + std::to_string(fields.size()));
    for (std::size_t j = 0; j < p; ++j) {
      const Feature& f = schema.feature(j);
      const std::string& cell = fields[feature_cols[j]];
      if (IsMissing(cell)) {
        Require(options.missing == MissingPolicy::kImpute, ErrorCode::kParse,
                "missing value in column '" + f.name + "' at row " + std::to_string(row));
        columns[j].push_back(0.0);
        missing[j].resize(row - 1, false);
        missing[j].push_back(true);
        any_missing = true;
        continue;
      }
      if (f.is_categorical()) {
        const auto id = f.LevelId(cell);
        Require(id.has_value(), ErrorCode::kSchema,
                "unseen level '" + cell + "' in column '" + f.name + "' at row " +
                    std::to_string(row));
        columns[j].push_back(static_cast<double>(*id));
      } else {
        double v;
        Require(ParseReal(cell, v), ErrorCode::kParse,
                "malformed CSV row " + std::to_string(row) + ": '" + cell +
                    "' in column '" + f.name + "' is not a finite number");
        columns[j].push_back(v);
      }
    }
    for (auto& extra : extras) {
      if (!extra.col) continue;
      const std::string& cell = fields[*extra.col];
      Require(!IsMissing(cell), ErrorCode::kParse,
              "missing value in column '" + extra.name + "' at row " + std::to_string(row));
      double v;
      Require(ParseReal(cell, v), ErrorCode::kParse,
              "malformed CSV row " + std::to_string(row) + ": '" + cell +
                  "' in column '" + extra.name + "' is not a finite number");
      extra.values.push_back(v);
    }
  }
  Require(row > 0, ErrorCode::kDegenerate, "no rows: CSV has a header but no data");
  if (extras[1].col) {
    for (std::size_t i = 0; i < extras[1].values.size(); ++i) {
      Require(extras[1].values[i] > 0.0, ErrorCode::kSchema,
              "non-positive exposure at row " + std::to_string(i + 1));
    }
  }

  std::size_t imputed = 0;
  if (any_missing) {
    for (std::size_t j = 0; j < p; ++j) {
      if (missing[j].empty()) continue;
      missing[j].resize(row, false);
      std::vector<double> observed;
      for (std::size_t i = 0; i < row; ++i) {
        if (!missing[j][i]) observed.push_back(columns[j][i]);
      }
      const Feature& f = schema.feature(j);
      Require(!observed.empty(), ErrorCode::kDegenerate,
              "column '" + f.name + "' has no observed values to impute from");
      double fill;
      if (f.is_categorical()) {
        std::vector<std::size_t> counts(f.levels.size(), 0);
        for (double v : observed) ++counts[static_cast<std::size_t>(v)];
        fill = static_cast<double>(std::max_element(counts.begin(), counts.end()) -
                                   counts.begin());
      } else {
        std::sort(observed.begin(), observed.end());
        fill = SortedQuantile(observed, 0.5);
      }
      for (std::size_t i = 0; i < row; ++i) {
        if (missing[j][i]) {
          columns[j][i] = fill;
          ++imputed;
        }
      }
    }
    std::clog << "warning: imputed " << imputed << " missing feature cells\n";
  }
  if (report != nullptr) {
    report->rows = row;
    report->imputed_cells = imputed;
  }
  const auto take = [&](int e) -> std::optional<std::vector<double>> {
    if (!extras[e].col) return std::nullopt;
    return std::move(extras[e].values);
  };
  return Dataset::FromColumns(schema, std::move(columns), take(0), take(1), take(2));
}

Dataset LoadCsv(const std::string& path, const FeatureSchema& schema,
                const CsvOptions& options, CsvReport* report) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open CSV file '" + path + "'");
  return ReadCsv(in, schema, options, report);
}

void WriteCsv(const Dataset& data, std::ostream& out, char delimiter) {
  const FeatureSchema& schema = data.schema();
  std::vector<std::string> header;
  for (const auto& f : schema.features()) header.push_back(f.name);
  for (const auto* extra : {&schema.target(), &schema.exposure(), &schema.weight()}) {
    if (extra->has_value()) header.push_back(**extra);
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c > 0) out << delimiter;
    out << NeedsQuoting(header[c], delimiter);
  }
  out << '\n';
  const auto target = data.has_target() ? std::optional(data.target()) : std::nullopt;
  const auto exposure = data.exposure();
  const auto weight = data.weight();
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    for (std::size_t j = 0; j < schema.size(); ++j) {
      if (j > 0) out << delimiter;
      const Feature& f = schema.feature(j);
      const double v = data.value(i, j);
      if (f.is_categorical()) {
        out << NeedsQuoting(f.levels[static_cast<std::size_t>(v)], delimiter);
      } else {
        out << FormatReal(v);
      }
    }
    for (const auto& extra : {target, exposure, weight}) {
      if (extra) out << delimiter << FormatReal((*extra)[i]);
    }
    out << '\n';
  }
}

}  // namespace posthoc
