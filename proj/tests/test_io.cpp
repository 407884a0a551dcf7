#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cwrisk/csv.hpp"
#include "cwrisk/experiments.hpp"
#include "cwrisk/rng.hpp"
#include "cwrisk/types.hpp"

using namespace cwrisk;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory for this test binary's files.
fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "cwrisk_io_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char ch : text)
    if (ch == '\n') ++n;
  return n;
}

// Three linearly separated 2-D clusters labeled 5, 7, 9.
std::string cluster_csv(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  const double cx[3] = {0.0, 4.0, 8.0};
  const long long lab[3] = {5, 7, 9};
  std::string text;
  char buf[96];
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c = 0; c < 3; ++c) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%lld\n",
                    cx[c] + rng.uniform() - 0.5, rng.uniform(), lab[c]);
      text += buf;
    }
  }
  return text;
}

}  // namespace

TEST_CASE("labels are remapped by sorted original value") {
  const auto p = write_file("remap.csv",
                            "1.0,2.0,7\n"
                            "3.0,4.0,3\n"
                            "5.0,6.0,5\n"
                            "7.0,8.0,3\n");
  const LoadedCsv got = load_csv(p.string());
  CHECK(got.label_values == std::vector<long long>{3, 5, 7});
  CHECK(got.data.k == 3);
  CHECK(got.data.d == 2);
  CHECK(got.data.y == std::vector<int>{2, 0, 1, 0});
  CHECK(got.data.x == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(got.header.empty());
}

TEST_CASE("header rows are kept and counted in line numbers") {
  const auto p = write_file("hdr.csv",
                            "f1,f2,label\n"
                            "1.0,2.0,0\n"
                            "bad,4.0,1\n");
  CsvOptions opts;
  opts.has_header = true;
  try {
    load_csv(p.string(), opts);
    FAIL("expected a parse failure");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  const auto ok = write_file("hdr_ok.csv",
                             "f1,f2,label\n"
                             "1.0,2.0,0\n"
                             "3.0,4.0,1\n");
  const LoadedCsv got = load_csv(ok.string(), opts);
  CHECK(got.header == std::vector<std::string>{"f1", "f2", "label"});
  CHECK(got.data.n == 2);
}

TEST_CASE("malformed rows are rejected with their line number") {
  CsvOptions opts;

  const auto short_row = write_file("short.csv",
                                    "1.0,2.0,0\n"
                                    "1.0,1\n");
  try {
    load_csv(short_row.string(), opts);
    FAIL("expected a field-count failure");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("expected 3 fields, got 2") != std::string::npos);
  }

  const auto nan_row = write_file("nan.csv", "1.0,2.0,0\nnan,1.0,1\n");
  CHECK_THROWS_AS(load_csv(nan_row.string(), opts), DataError);

  const auto frac_label = write_file("frac.csv", "1.0,2.0,0.5\n2.0,3.0,1\n");
  CHECK_THROWS_AS(load_csv(frac_label.string(), opts), DataError);

  const auto one_class = write_file("one.csv", "1.0,2.0,4\n2.0,3.0,4\n");
  CHECK_THROWS_AS(load_csv(one_class.string(), opts), DataError);

  CHECK_THROWS_AS(load_csv((scratch() / "absent.csv").string(), opts),
                  DataError);
}

TEST_CASE("label column can sit anywhere and derives the features") {
  const auto p = write_file("first.csv",
                            "1,0.5,0.25\n"
                            "0,1.5,1.25\n");
  CsvOptions opts;
  opts.label_column = 0;
  const LoadedCsv got = load_csv(p.string(), opts);
  CHECK(got.data.d == 2);
  CHECK(got.data.y == std::vector<int>{1, 0});
  CHECK(got.data.x == std::vector<double>{0.5, 0.25, 1.5, 1.25});
}

TEST_CASE("a shared label map rejects labels it has never seen") {
  const auto p = write_file("shared.csv", "1.0,9\n2.0,3\n");
  CsvOptions opts;
  try {
    load_csv(p.string(), opts, {3, 5, 7});
    FAIL("expected an unseen-label failure");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("label 9") != std::string::npos);
  }
  const auto ok = write_file("shared_ok.csv", "1.0,7\n2.0,3\n");
  const LoadedCsv got = load_csv(ok.string(), opts, {3, 5, 7});
  CHECK(got.data.k == 3);  // map size, not observed size
  CHECK(got.data.y == std::vector<int>{2, 0});
}

TEST_CASE("carriage returns and blank lines are tolerated") {
  const auto p = write_file("crlf.csv", "1.0,2.0,0\r\n\r\n3.0,4.0,1\r\n\n");
  const LoadedCsv got = load_csv(p.string());
  CHECK(got.data.n == 2);
  CHECK(got.data.x == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("stock grids have the documented shapes") {
  const auto grid = SweepConfig::default_p_grid();
  REQUIRE(grid.size() == 10);
  CHECK(grid.front() == doctest::Approx(0.80));
  CHECK(grid.back() == doctest::Approx(0.98));
  CHECK(SweepConfig::default_methods().size() == 4);
  CHECK(SweepConfig::ablation_methods().size() == 6);
}

TEST_CASE("synthetic sweeps write stable files and a parsable manifest") {
  SweepConfig cfg;
  cfg.p_grid = {0.85};
  cfg.methods = {ObjectiveSpec::standard(), ObjectiveSpec::lcvar(0.1)};
  cfg.n_per_split = 400;
  cfg.epochs = 40;
  cfg.seed = 5;
  cfg.out_dir = (scratch() / "sweep_out").string();

  const auto records = run_synthetic_sweep(cfg);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK(r.p == 0.85);
    CHECK(r.worst_risk == std::max(r.class0_risk, r.class1_risk));
  }

  const fs::path csv_path = fs::path(cfg.out_dir) / "sweep.csv";
  const std::string first = read_file(csv_path);
  CHECK(first.rfind("p,method,alpha,kappa,c,class0_risk,class1_risk,"
                    "worst_risk\n", 0) == 0);
  CHECK(count_lines(first) == 3);  // header + one row per cell

  // Re-running the identical configuration reproduces the bytes.
  run_synthetic_sweep(cfg);
  CHECK(read_file(csv_path) == first);

  const auto manifest =
      nlohmann::json::parse(read_file(fs::path(cfg.out_dir) / "manifest.json"));
  CHECK(manifest.at("command") == "synth-sweep");
  CHECK(manifest.at("seed") == 5);
  CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
  CHECK(manifest.contains("git"));
  CHECK(manifest.at("cells").size() == 2);
}

TEST_CASE("real-data runs score every method on the shared test split") {
  write_file("blob_train.csv", cluster_csv(60, 11));
  write_file("blob_test.csv", cluster_csv(40, 22));

  RealConfig cfg;
  cfg.train_path = (scratch() / "blob_train.csv").string();
  cfg.test_path = (scratch() / "blob_test.csv").string();
  cfg.methods = {ObjectiveSpec::standard(), ObjectiveSpec::balanced()};
  cfg.epochs = 500;
  cfg.lr_start = 0.2;
  cfg.out_dir = (scratch() / "real_out").string();

  const auto records = run_real(cfg);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    REQUIRE(r.per_class.size() == 3);
    CHECK(r.worst_class_risk ==
          *std::max_element(r.per_class.begin(), r.per_class.end()));
    CHECK(r.standard_risk <= r.worst_class_risk + 1e-12);
    // Linearly separated clusters: everything should fit well.
    CHECK(r.worst_class_risk < 0.2);
  }

  const std::string real_csv =
      read_file(fs::path(cfg.out_dir) / "real.csv");
  CHECK(real_csv.rfind("method,alpha,kappa,c,standard_risk,worst_class_risk\n",
                       0) == 0);
  CHECK(count_lines(real_csv) == 3);
  const std::string per_class =
      read_file(fs::path(cfg.out_dir) / "per_class.csv");
  CHECK(per_class.rfind("method,class_id,risk\n", 0) == 0);
  CHECK(count_lines(per_class) == 7);  // header + 2 methods x 3 classes

  const auto manifest = nlohmann::json::parse(
      read_file(fs::path(cfg.out_dir) / "manifest.json"));
  CHECK(manifest.at("command") == "real");
  CHECK(manifest.at("config").at("train_rows") == 180);
  CHECK(manifest.at("config").at("test_rows") == 120);
  CHECK(manifest.at("config").at("classes") == 3);
}

TEST_CASE("an empty method list is a no-op run") {
  write_file("noop_train.csv", cluster_csv(20, 31));
  write_file("noop_test.csv", cluster_csv(10, 32));
  RealConfig cfg;
  cfg.train_path = (scratch() / "noop_train.csv").string();
  cfg.test_path = (scratch() / "noop_test.csv").string();
  cfg.out_dir = (scratch() / "noop_out").string();
  const auto records = run_real(cfg);
  CHECK(records.empty());
  CHECK(count_lines(read_file(fs::path(cfg.out_dir) / "real.csv")) == 1);
}

TEST_CASE("ablation adds the stock grids without duplicating requests") {
  write_file("abl_train.csv", cluster_csv(40, 41));
  write_file("abl_test.csv", cluster_csv(20, 42));
  RealConfig cfg;
  cfg.train_path = (scratch() / "abl_train.csv").string();
  cfg.test_path = (scratch() / "abl_test.csv").string();
  cfg.epochs = 30;
  cfg.ablation = true;

  cfg.methods = {ObjectiveSpec::standard()};
  CHECK(run_real(cfg).size() == 7);  // 1 requested + 6 grid entries

  // A requested method that also sits in the grid is run only once.
  cfg.methods = {ObjectiveSpec::lcvar(0.1)};
  CHECK(run_real(cfg).size() == 6);
}

TEST_CASE("train and test splits must share a feature dimension") {
  write_file("dim_train.csv", cluster_csv(20, 51));
  write_file("dim_test.csv", "1.0,5\n2.0,7\n3.0,9\n");
  RealConfig cfg;
  cfg.train_path = (scratch() / "dim_train.csv").string();
  cfg.test_path = (scratch() / "dim_test.csv").string();
  cfg.methods = {ObjectiveSpec::standard()};
  cfg.epochs = 5;
  CHECK_THROWS_AS(run_real(cfg), DataError);
}

#ifdef CWRISK_CLI
namespace {

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd =
      std::string(CWRISK_CLI) + " " + args + " >" + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("command line evaluates weighted risks end to end") {
  write_file("risks.txt", "0.9 0.5 0.1\n");
  const fs::path out = scratch() / "cli_out.json";
  const int code = run_cli(
      "lcvar-eval --risks " + (scratch() / "risks.txt").string() +
          " --alpha 0.5",
      out);
  REQUIRE(code == 0);
  const auto report = nlohmann::json::parse(read_file(out));
  CHECK(report.at("value").get<double>() ==
        doctest::Approx(0.9 * 2.0 / 3.0 + 0.5 / 3.0).epsilon(1e-9));
  CHECK(report.at("lambda").get<double>() == doctest::Approx(0.5));
  CHECK(report.at("q_star").size() == 3);
}

TEST_CASE("command line exit codes distinguish failure kinds") {
  const fs::path out = scratch() / "cli_err.txt";
  CHECK(run_cli("no-such-subcommand", out) == 1);
  CHECK(run_cli("lcvar-eval --risks /nonexistent.txt --alpha 0.5", out) == 2);
  CHECK(run_cli("real --train /nope.csv --test /nope.csv --methods standard "
                "--seed 1",
                out) == 2);
  // Mutually exclusive level flags are a usage error.
  write_file("risks2.txt", "0.9 0.1\n");
  CHECK(run_cli("lcvar-eval --risks " + (scratch() / "risks2.txt").string() +
                    " --alpha 0.5 --kappa 1.0 --c 0.05",
                out) == 1);
}

TEST_CASE("command line sweep writes its outputs") {
  const fs::path dir = scratch() / "cli_sweep";
  const int code = run_cli(
      "synth-sweep --p 0.85 --methods standard --n 200 --epochs 10 --seed 3 "
      "--out " + dir.string(),
      scratch() / "cli_sweep_log.txt");
  REQUIRE(code == 0);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}
#endif  // CWRISK_CLI
