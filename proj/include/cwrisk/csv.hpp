#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwrisk/types.hpp"

namespace cwrisk {

struct CsvOptions {
  bool has_header = false;
  // Label column index; negative means the last column.
  long label_column = -1;
};

struct LoadedCsv {
  LabeledDataset data;
  // Sorted distinct original label values; class i corresponds to
  // label_values[i].
  std::vector<long long> label_values;
  std::vector<std::string> header;  // empty when has_header is false
};

// Loads a numeric CSV with one integer label column; remaining columns are
// features.  Labels are remapped to {0,...,k-1} preserving their sorted
// original order.  Malformed rows raise DataError naming the 1-based line.
LoadedCsv load_csv(const std::string& path, const CsvOptions& opts = {});

// Same, but reuses an existing label mapping (e.g. the training split's) so
// both splits agree on class indices.  Unseen labels raise DataError.
LoadedCsv load_csv(const std::string& path, const CsvOptions& opts,
                   const std::vector<long long>& label_values);

}  // namespace cwrisk
