#include "cwrisk/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cwrisk/rng.hpp"
#include "cwrisk/synthetic.hpp"
#include "cwrisk/version.hpp"
#include "json.hpp"

namespace cwrisk {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Fixed significant-digit formatting so reruns emit byte-identical CSVs.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

bool same_spec(const ObjectiveSpec& a, const ObjectiveSpec& b) {
  return a.kind == b.kind && a.alpha == b.alpha && a.kappa == b.kappa &&
         a.c == b.c;
}

// Labels stay plain ("lcvar") when a kind appears once; parameterized
// ("lcvar_alpha0.05") when a run compares several settings of one kind.
std::string method_label(const ObjectiveSpec& spec,
                         const std::vector<ObjectiveSpec>& all) {
  std::size_t same_kind = 0;
  for (const auto& other : all)
    if (other.kind == spec.kind) ++same_kind;
  if (same_kind <= 1) return spec.name();
  char buf[96];
  switch (spec.kind) {
    case Objective::LCVaR:
      std::snprintf(buf, sizeof(buf), "%s_alpha%g", spec.name().c_str(),
                    spec.alpha);
      return buf;
    case Objective::LHCVaR:
      std::snprintf(buf, sizeof(buf), "%s_kappa%g_c%g", spec.name().c_str(),
                    spec.kappa, spec.c);
      return buf;
    default:
      return spec.name();
  }
}

// alpha / kappa / c CSV fields; blank where a parameter does not apply.
std::string param_fields(const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case Objective::LCVaR:
      return fmt(spec.alpha) + ",,";
    case Objective::LHCVaR:
      return "," + fmt(spec.kappa) + "," + fmt(spec.c);
    default:
      return ",,";
  }
}

json spec_json(const ObjectiveSpec& spec) {
  json j;
  j["method"] = spec.name();
  if (spec.kind == Objective::LCVaR) j["alpha"] = spec.alpha;
  if (spec.kind == Objective::LHCVaR) {
    j["kappa"] = spec.kappa;
    j["c"] = spec.c;
  }
  return j;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_manifest(const std::filesystem::path& dir, json manifest) {
  manifest["git"] = kGitDescribe;
  manifest["config_hash"] = config_hash(manifest.at("config"));
  auto out = open_out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
}

}  // namespace

std::vector<double> SweepConfig::default_p_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 9; ++i) grid.push_back((80 + 2 * i) / 100.0);
  return grid;
}

std::vector<ObjectiveSpec> SweepConfig::default_methods() {
  return {ObjectiveSpec::standard(), ObjectiveSpec::balanced(),
          ObjectiveSpec::lcvar(0.1), ObjectiveSpec::lhcvar(1.0, 0.05)};
}

std::vector<ObjectiveSpec> SweepConfig::ablation_methods() {
  return {ObjectiveSpec::lcvar(0.01),       ObjectiveSpec::lcvar(0.05),
          ObjectiveSpec::lcvar(0.1),        ObjectiveSpec::lhcvar(0.8, 0.05),
          ObjectiveSpec::lhcvar(1.0, 0.05), ObjectiveSpec::lhcvar(1.2, 0.05)};
}

std::vector<SweepRecord> run_synthetic_sweep(const SweepConfig& config,
                                             const std::string& command_name) {
  const std::vector<double> p_grid =
      config.p_grid.empty() ? SweepConfig::default_p_grid() : config.p_grid;
  const std::vector<ObjectiveSpec> methods =
      config.methods.empty() ? SweepConfig::default_methods() : config.methods;
  if (config.n_per_split == 0)
    throw std::invalid_argument("n_per_split must be positive");

  std::vector<SweepRecord> records;
  json cells = json::array();
  for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
    const SyntheticWorld world(p_grid[pi]);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const auto t0 = Clock::now();
      // Streams depend only on (seed, cell coordinates), never on the order
      // in which cells run.
      const std::uint64_t cell = combine_seed(config.seed, pi, mi);
      const LabeledDataset train_data =
          synth_sample(world, config.n_per_split, combine_seed(cell, 1));
      const LabeledDataset test_data =
          synth_sample(world, config.n_per_split, combine_seed(cell, 2));

      TrainConfig tc;
      tc.objective = methods[mi];
      tc.epochs = config.epochs;
      tc.lr_start = config.lr_start;
      tc.lr_end = config.lr_end;
      const LinearModel model = train(train_data, tc);
      const RiskReport report =
          evaluate(model, test_data, methods[mi], "test-empirical");

      SweepRecord rec;
      rec.p = p_grid[pi];
      rec.objective = methods[mi];
      rec.class0_risk = report.per_class[0];
      rec.class1_risk = report.per_class[1];
      rec.worst_risk = std::max(rec.class0_risk, rec.class1_risk);
      records.push_back(rec);

      json cell_j;
      cell_j["p"] = p_grid[pi];
      cell_j["method"] = method_label(methods[mi], methods);
      cell_j["seconds"] = elapsed_s(t0);
      cells.push_back(cell_j);
    }
  }

  if (!config.out_dir.empty()) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    auto csv = open_out(dir / "sweep.csv");
    csv << "p,method,alpha,kappa,c,class0_risk,class1_risk,worst_risk\n";
    for (const auto& rec : records)
      csv << fmt(rec.p) << "," << method_label(rec.objective, methods) << ","
          << param_fields(rec.objective) << "," << fmt(rec.class0_risk) << ","
          << fmt(rec.class1_risk) << "," << fmt(rec.worst_risk) << "\n";

    json cfg;
    cfg["p_grid"] = p_grid;
    cfg["methods"] = json::array();
    for (const auto& m : methods) cfg["methods"].push_back(spec_json(m));
    cfg["n_per_split"] = config.n_per_split;
    cfg["epochs"] = config.epochs;
    cfg["lr_start"] = config.lr_start;
    cfg["lr_end"] = config.lr_end;

    json manifest;
    manifest["command"] = command_name;
    manifest["seed"] = config.seed;
    manifest["config"] = cfg;
    manifest["cells"] = cells;
    write_manifest(dir, manifest);
  }
  return records;
}

namespace {

// Train-split mean/stddev scaling; near-constant columns keep scale 1 so the
// transform stays invertible.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  explicit Standardizer(const LabeledDataset& data)
      : mean(data.d, 0.0), scale(data.d, 1.0) {
    for (std::size_t i = 0; i < data.n; ++i) {
      const double* row = data.row(i);
      for (std::size_t j = 0; j < data.d; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < data.d; ++j) mean[j] /= data.n;
    std::vector<double> var(data.d, 0.0);
    for (std::size_t i = 0; i < data.n; ++i) {
      const double* row = data.row(i);
      for (std::size_t j = 0; j < data.d; ++j) {
        const double c = row[j] - mean[j];
        var[j] += c * c;
      }
    }
    for (std::size_t j = 0; j < data.d; ++j) {
      const double sd = std::sqrt(var[j] / data.n);
      if (sd > 1e-12) scale[j] = sd;
    }
  }

  LabeledDataset apply(const LabeledDataset& data) const {
    std::vector<double> x = data.x;
    for (std::size_t i = 0; i < data.n; ++i)
      for (std::size_t j = 0; j < data.d; ++j)
        x[i * data.d + j] = (x[i * data.d + j] - mean[j]) / scale[j];
    return LabeledDataset(data.k, data.d, std::move(x), data.y);
  }
};

}  // namespace

std::vector<RealRecord> run_real(const RealConfig& config) {
  std::vector<ObjectiveSpec> methods = config.methods;
  if (config.ablation)
    for (const auto& extra : SweepConfig::ablation_methods())
      methods.push_back(extra);
  // Deduplicate while preserving first-seen order.
  std::vector<ObjectiveSpec> unique;
  for (const auto& m : methods) {
    bool seen = false;
    for (const auto& u : unique) seen = seen || same_spec(u, m);
    if (!seen) unique.push_back(m);
  }
  methods = unique;

  const LoadedCsv train_csv = load_csv(config.train_path, config.csv);
  const LoadedCsv test_csv =
      load_csv(config.test_path, config.csv, train_csv.label_values);

  LabeledDataset train_data = train_csv.data;
  LabeledDataset test_data = test_csv.data;
  if (train_data.d != test_data.d)
    throw DataError("train/test feature dimensions differ");
  if (config.standardize) {
    const Standardizer stats(train_data);
    train_data = stats.apply(train_data);
    test_data = stats.apply(test_data);
  }
  const ClassProbabilities test_probs =
      ClassProbabilities::from_dataset(test_data);

  std::vector<RealRecord> records;
  json cells = json::array();
  for (const auto& spec : methods) {
    const auto t0 = Clock::now();
    TrainConfig tc;
    tc.objective = spec;
    tc.epochs = config.epochs;
    tc.lr_start = config.lr_start;
    tc.lr_end = config.lr_end;
    const LinearModel model = train(train_data, tc);
    const RiskReport report = evaluate(model, test_data, spec, "test-empirical");

    RealRecord rec;
    rec.objective = spec;
    rec.per_class = report.per_class;
    double std_risk = 0.0;
    for (std::size_t i = 0; i < report.per_class.size(); ++i)
      std_risk += test_probs[i] * report.per_class[i];
    rec.standard_risk = std_risk;
    rec.worst_class_risk =
        *std::max_element(report.per_class.begin(), report.per_class.end());
    records.push_back(rec);

    json cell_j;
    cell_j["method"] = method_label(spec, methods);
    cell_j["seconds"] = elapsed_s(t0);
    cells.push_back(cell_j);
  }

  if (!config.out_dir.empty()) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    auto table = open_out(dir / "real.csv");
    table << "method,alpha,kappa,c,standard_risk,worst_class_risk\n";
    for (const auto& rec : records)
      table << method_label(rec.objective, methods) << ","
            << param_fields(rec.objective) << "," << fmt(rec.standard_risk)
            << "," << fmt(rec.worst_class_risk) << "\n";

    auto per_class = open_out(dir / "per_class.csv");
    per_class << "method,class_id,risk\n";
    for (const auto& rec : records)
      for (std::size_t i = 0; i < rec.per_class.size(); ++i)
        per_class << method_label(rec.objective, methods) << "," << i << ","
                  << fmt(rec.per_class[i]) << "\n";

    json cfg;
    cfg["train_path"] = config.train_path;
    cfg["test_path"] = config.test_path;
    cfg["has_header"] = config.csv.has_header;
    cfg["label_column"] = config.csv.label_column;
    cfg["methods"] = json::array();
    for (const auto& m : methods) cfg["methods"].push_back(spec_json(m));
    cfg["ablation"] = config.ablation;
    cfg["standardize"] = config.standardize;
    cfg["epochs"] = config.epochs;
    cfg["lr_start"] = config.lr_start;
    cfg["lr_end"] = config.lr_end;
    cfg["train_rows"] = train_data.n;
    cfg["test_rows"] = test_data.n;
    cfg["classes"] = train_data.k;

    json manifest;
    manifest["command"] = "real";
    manifest["seed"] = config.seed;
    manifest["config"] = cfg;
    manifest["cells"] = cells;
    write_manifest(dir, manifest);
  }
  return records;
}

}  // namespace cwrisk
