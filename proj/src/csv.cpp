#include "cwrisk/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cwrisk {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& what) {
  std::ostringstream os;
  os << path << ": line " << line << ": " << what;
  throw DataError(os.str());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_number(const std::string& field, const std::string& path,
                    std::size_t line) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) fail(path, line, "field '" + field + "' is not numeric");
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0')
    fail(path, line, "trailing characters in field '" + field + "'");
  if (!std::isfinite(v))
    fail(path, line, "non-finite value '" + field + "'");
  return v;
}

long long parse_label(const std::string& field, const std::string& path,
                      std::size_t line) {
  const double v = parse_number(field, path, line);
  const double r = std::nearbyint(v);
  if (std::fabs(v - r) > 1e-9 || std::fabs(r) > 9.0e15)
    fail(path, line, "label '" + field + "' is not an integer");
  return static_cast<long long>(r);
}

LoadedCsv load_impl(const std::string& path, const CsvOptions& opts,
                    const std::vector<long long>* shared_labels) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");

  LoadedCsv out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t ncols = 0;
  std::size_t label_idx = 0;
  std::vector<double> features;
  std::vector<long long> labels;

  if (opts.has_header) {
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    ++lineno;
    out.header = split_fields(line);
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (ncols == 0) {
      ncols = fields.size();
      if (ncols < 2)
        fail(path, lineno, "need at least one feature and a label column");
      if (opts.has_header && out.header.size() != ncols)
        fail(path, lineno, "header/data column count mismatch");
      const long lc = opts.label_column;
      if (lc >= 0 && static_cast<std::size_t>(lc) >= ncols)
        throw DataError(path + ": label column out of range");
      label_idx = lc < 0 ? ncols - 1 : static_cast<std::size_t>(lc);
    } else if (fields.size() != ncols) {
      std::ostringstream os;
      os << "expected " << ncols << " fields, got " << fields.size();
      fail(path, lineno, os.str());
    }
    for (std::size_t i = 0; i < ncols; ++i) {
      if (i == label_idx)
        labels.push_back(parse_label(fields[i], path, lineno));
      else
        features.push_back(parse_number(fields[i], path, lineno));
    }
  }
  if (labels.empty()) throw DataError(path + ": no data rows");

  if (shared_labels) {
    out.label_values = *shared_labels;
  } else {
    out.label_values = labels;
    std::sort(out.label_values.begin(), out.label_values.end());
    out.label_values.erase(
        std::unique(out.label_values.begin(), out.label_values.end()),
        out.label_values.end());
  }
  if (out.label_values.size() < 2)
    throw DataError(path + ": fewer than two distinct labels");

  std::vector<int> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::lower_bound(out.label_values.begin(),
                                     out.label_values.end(), labels[i]);
    if (it == out.label_values.end() || *it != labels[i]) {
      std::ostringstream os;
      os << "label " << labels[i] << " not present in the shared label map";
      throw DataError(path + ": " + os.str());
    }
    y[i] = static_cast<int>(it - out.label_values.begin());
  }
  out.data = LabeledDataset(out.label_values.size(), ncols - 1,
                            std::move(features), std::move(y));
  return out;
}

}  // namespace

LoadedCsv load_csv(const std::string& path, const CsvOptions& opts) {
  return load_impl(path, opts, nullptr);
}

LoadedCsv load_csv(const std::string& path, const CsvOptions& opts,
                   const std::vector<long long>& label_values) {
  return load_impl(path, opts, &label_values);
}

}  // namespace cwrisk
