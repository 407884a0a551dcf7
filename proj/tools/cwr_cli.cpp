// cwr: train and evaluate class-weighted / tail-weighted risk objectives.
//
// Subcommands:
//   synth-sweep     p-grid sweep on the 1-D synthetic world
//   synth-ablation  same sweep over the level/temperature grids
//   real            train/test CSV pair (e.g. Covertype)
//   lcvar-eval      one-shot dual evaluation of a risk vector
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cwrisk/experiments.hpp"
#include "cwrisk/types.hpp"
#include "cwrisk/uncertainty.hpp"
#include "json.hpp"

namespace {

using namespace cwrisk;

std::vector<ObjectiveSpec> parse_methods(const std::vector<std::string>& names,
                                         double alpha, double kappa, double c) {
  std::vector<ObjectiveSpec> specs;
  for (const auto& name : names) {
    if (name == "standard")
      specs.push_back(ObjectiveSpec::standard());
    else if (name == "balanced")
      specs.push_back(ObjectiveSpec::balanced());
    else if (name == "lcvar")
      specs.push_back(ObjectiveSpec::lcvar(alpha));
    else if (name == "lhcvar")
      specs.push_back(ObjectiveSpec::lhcvar(kappa, c));
    else
      throw std::invalid_argument("unknown method '" + name +
                                  "' (expected standard, balanced, lcvar or "
                                  "lhcvar)");
  }
  return specs;
}

// Reads a whitespace/comma-separated list of reals from a file, or from
// stdin when the path is "-".
std::vector<double> read_vector(const std::string& path) {
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) throw DataError(path + ": cannot open file");
  }
  std::istream& in = path == "-" ? std::cin : file;
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t start = 0;
    while (start <= token.size()) {
      std::size_t comma = token.find(',', start);
      if (comma == std::string::npos) comma = token.size();
      const std::string piece = token.substr(start, comma - start);
      if (!piece.empty()) {
        try {
          std::size_t used = 0;
          const double v = std::stod(piece, &used);
          if (used != piece.size()) throw std::invalid_argument(piece);
          values.push_back(v);
        } catch (const std::exception&) {
          throw DataError("not a number: '" + piece + "'");
        }
      }
      start = comma + 1;
    }
  }
  if (values.empty()) throw DataError("empty risk/probability vector");
  return values;
}

void add_train_flags(CLI::App* cmd, std::size_t& epochs, double& lr_start,
                     double& lr_end, std::uint64_t& seed, std::string& out) {
  cmd->add_option("--epochs", epochs, "Gradient descent epochs")
      ->capture_default_str();
  cmd->add_option("--lr-start", lr_start, "Initial learning rate")
      ->capture_default_str();
  cmd->add_option("--lr-end", lr_end, "Final learning rate")
      ->capture_default_str();
  cmd->add_option("--seed", seed, "Base RNG seed")->required();
  cmd->add_option("--out", out, "Output directory for CSVs and manifest");
}

int run(int argc, char** argv) {
  CLI::App app{"Class-weighted and tail-weighted risk experiments"};
  app.require_subcommand(1);

  // Shared method/hyperparameter state; each subcommand registers the
  // subset of flags it honors.
  std::vector<std::string> method_names = {"standard", "balanced", "lcvar",
                                           "lhcvar"};
  double alpha = 0.1, kappa = 1.0, c = 0.05;
  std::size_t epochs = 2000;
  double lr_start = 0.01, lr_end = 0.0001;
  std::uint64_t seed = 0;
  std::string out_dir;

  // ---- synth-sweep / synth-ablation ----
  std::vector<double> p_grid;
  std::size_t n_per_split = 100000;
  CLI::App* sweep = app.add_subcommand(
      "synth-sweep", "Train/evaluate every method across a p grid");
  sweep->add_option("--p", p_grid,
                    "Class-0 marginals (default 0.80..0.98 step 0.02)");
  sweep->add_option("--methods", method_names, "Methods to run")
      ->capture_default_str();
  sweep->add_option("--alpha", alpha, "LCVaR level")->capture_default_str();
  sweep->add_option("--kappa", kappa, "LHCVaR schedule temperature")
      ->capture_default_str();
  sweep->add_option("--c", c, "LHCVaR schedule budget")->capture_default_str();
  sweep->add_option("--n", n_per_split, "Examples per train/test split")
      ->capture_default_str();
  add_train_flags(sweep, epochs, lr_start, lr_end, seed, out_dir);

  CLI::App* ablation = app.add_subcommand(
      "synth-ablation", "Sweep the level/temperature grids across p");
  ablation->add_option("--p", p_grid,
                       "Class-0 marginals (default 0.80..0.98 step 0.02)");
  ablation->add_option("--n", n_per_split, "Examples per train/test split")
      ->capture_default_str();
  add_train_flags(ablation, epochs, lr_start, lr_end, seed, out_dir);

  // ---- real ----
  std::string train_path, test_path;
  bool has_header = false;
  long label_column = -1;
  bool run_ablation = false;
  bool no_standardize = false;
  CLI::App* real = app.add_subcommand(
      "real", "Train/evaluate every method on a train/test CSV pair");
  real->add_option("--train", train_path, "Training CSV")->required();
  real->add_option("--test", test_path, "Test CSV")->required();
  real->add_flag("--header", has_header, "CSV files have a header row");
  real->add_option("--label-column", label_column,
                   "Label column index (negative = last)")
      ->capture_default_str();
  real->add_option("--methods", method_names, "Methods to run")
      ->capture_default_str();
  real->add_option("--alpha", alpha, "LCVaR level")->capture_default_str();
  real->add_option("--kappa", kappa, "LHCVaR schedule temperature")
      ->capture_default_str();
  real->add_option("--c", c, "LHCVaR schedule budget")->capture_default_str();
  real->add_flag("--ablation", run_ablation,
                 "Also run the level/temperature grids");
  real->add_flag("--no-standardize", no_standardize,
                 "Skip train-split feature standardization");
  add_train_flags(real, epochs, lr_start, lr_end, seed, out_dir);

  // ---- lcvar-eval ----
  std::string risks_path = "-";
  std::string probs_path;
  double eval_alpha = 0.0, eval_kappa = 0.0, eval_c = 0.0;
  CLI::App* eval = app.add_subcommand(
      "lcvar-eval",
      "Evaluate the tail-weighted dual on a risk vector (file or stdin)");
  eval->add_option("--risks", risks_path,
                   "Risk vector file, '-' for stdin")
      ->capture_default_str();
  eval->add_option("--probs", probs_path,
                   "Class marginals file (default uniform)");
  CLI::Option* opt_alpha =
      eval->add_option("--alpha", eval_alpha, "Uniform tail level in (0,1]");
  CLI::Option* opt_kappa =
      eval->add_option("--kappa", eval_kappa, "Schedule temperature");
  CLI::Option* opt_c = eval->add_option("--c", eval_c, "Schedule budget");
  opt_kappa->needs(opt_c);
  opt_c->needs(opt_kappa);
  opt_alpha->excludes(opt_kappa);
  opt_alpha->excludes(opt_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Prints help (exit 0) or the usage error; normalize failures to 1.
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (sweep->parsed() || ablation->parsed()) {
    SweepConfig config;
    config.p_grid = p_grid;
    config.methods = sweep->parsed()
                         ? parse_methods(method_names, alpha, kappa, c)
                         : SweepConfig::ablation_methods();
    config.n_per_split = n_per_split;
    config.epochs = epochs;
    config.lr_start = lr_start;
    config.lr_end = lr_end;
    config.seed = seed;
    config.out_dir = out_dir;
    const std::string name = sweep->parsed() ? "synth-sweep" : "synth-ablation";
    const auto records = run_synthetic_sweep(config, name);
    std::printf("%s: %zu records", name.c_str(), records.size());
    if (!out_dir.empty()) std::printf(" -> %s", out_dir.c_str());
    std::printf("\n");
    return 0;
  }

  if (real->parsed()) {
    RealConfig config;
    config.train_path = train_path;
    config.test_path = test_path;
    config.csv.has_header = has_header;
    config.csv.label_column = label_column;
    config.methods = parse_methods(method_names, alpha, kappa, c);
    config.ablation = run_ablation;
    config.standardize = !no_standardize;
    config.epochs = epochs;
    config.lr_start = lr_start;
    config.lr_end = lr_end;
    config.seed = seed;
    config.out_dir = out_dir;
    const auto records = run_real(config);
    for (const auto& rec : records)
      std::printf("%-10s standard %.4f  worst-class %.4f\n",
                  rec.objective.name().c_str(), rec.standard_risk,
                  rec.worst_class_risk);
    if (!out_dir.empty()) std::printf("results -> %s\n", out_dir.c_str());
    return 0;
  }

  // lcvar-eval
  const bool have_alpha = opt_alpha->count() > 0;
  const bool have_schedule = opt_kappa->count() > 0;
  if (have_alpha == have_schedule)
    throw std::invalid_argument(
        "lcvar-eval needs exactly one of --alpha or (--kappa and --c)");

  const std::vector<double> risks = read_vector(risks_path);
  std::vector<double> p;
  if (probs_path.empty())
    p.assign(risks.size(), 1.0 / static_cast<double>(risks.size()));
  else
    p = read_vector(probs_path);
  if (p.size() != risks.size())
    throw DataError("risk and probability vectors differ in length");
  const ClassProbabilities probs(std::move(p));

  const DualSolution sol =
      have_alpha ? lcvar_dual(risks, probs, eval_alpha)
                 : lhcvar_dual(risks, probs,
                               alpha_schedule(probs, eval_kappa, eval_c).alpha);

  nlohmann::json j;
  j["value"] = sol.value;
  j["lambda"] = sol.lambda;
  j["q_star"] = sol.q_star;
  j["active_set"] = sol.active_set;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
