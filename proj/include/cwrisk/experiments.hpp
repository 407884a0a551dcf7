#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwrisk/csv.hpp"
#include "cwrisk/train.hpp"
#include "cwrisk/types.hpp"

namespace cwrisk {

// One (p, method) cell of a synthetic run.
struct SweepRecord {
  double p = 0.0;
  ObjectiveSpec objective;
  double class0_risk = 0.0;
  double class1_risk = 0.0;
  double worst_risk = 0.0;
};

struct SweepConfig {
  std::vector<double> p_grid;          // empty -> default_p_grid()
  std::vector<ObjectiveSpec> methods;  // empty -> default_methods()
  std::size_t n_per_split = 100000;
  std::size_t epochs = 2000;
  double lr_start = 0.01;
  double lr_end = 0.0001;
  std::uint64_t seed = 0;
  // When non-empty, results and a manifest are written under this directory.
  std::string out_dir;

  static std::vector<double> default_p_grid();
  static std::vector<ObjectiveSpec> default_methods();
  // Level/temperature grids used by the ablation subcommand.
  static std::vector<ObjectiveSpec> ablation_methods();
};

// Trains and evaluates every (p, method) cell; each cell's sampling is
// seeded by (seed, p-index, method-index) so results do not depend on cell
// execution order.  Writes sweep.csv and manifest.json when out_dir is set.
std::vector<SweepRecord> run_synthetic_sweep(
    const SweepConfig& config, const std::string& command_name = "synth-sweep");

struct RealRecord {
  ObjectiveSpec objective;
  double standard_risk = 0.0;      // test-marginal weighted mean of per_class
  double worst_class_risk = 0.0;
  std::vector<double> per_class;   // ZeroOne risks on the test split
};

struct RealConfig {
  std::string train_path;
  std::string test_path;
  CsvOptions csv;
  std::vector<ObjectiveSpec> methods;  // empty (without ablation) -> no-op
  bool ablation = false;               // also run the level/temperature grids
  bool standardize = true;             // train-split mean/variance scaling
  std::size_t epochs = 2000;
  double lr_start = 0.01;
  double lr_end = 0.0001;
  std::uint64_t seed = 0;
  std::string out_dir;
};

// Trains each method on the train split and scores it on the test split.
// Writes real.csv, per_class.csv and manifest.json when out_dir is set.
std::vector<RealRecord> run_real(const RealConfig& config);

}  // namespace cwrisk
