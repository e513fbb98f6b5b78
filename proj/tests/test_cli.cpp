#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gelato/cli.hpp"
#include "gelato/experiment.hpp"
#include "gelato/io.hpp"
#include "gelato/simulate.hpp"
#include "oracles.hpp"

using namespace gelato;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "gelato");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "gelato_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_matrix_csv(const fs::path& p, const Matrix& m, const std::string& header = "") {
  std::ofstream f(p);
  if (!header.empty()) f << header << "\n";
  write_csv(f, m);
}

}  // namespace

TEST_CASE("read_csv") {
  std::istringstream in("\xEF\xBB\xBF" "a,b\n1,2\n3.5,-4e-1\n");
  const CsvTable t = read_csv(in);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.values.rows() == 2);
  CHECK(t.values(1, 1) == -0.4);

  std::istringstream ragged("1,2\n3\n");
  try {
    read_csv(ragged);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse_error);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 2);
  }
  std::istringstream missing("1,2\n3,\n");
  CHECK_THROWS_AS(read_csv(missing), Error);
  std::istringstream text("1,2\n3,x\n");
  CHECK_THROWS_AS(read_csv(text), Error);
}

TEST_CASE("matrix JSON round trip is exact") {
  const Matrix m = oracle::random_matrix(4, 4, 77) / 3.0;
  const nlohmann::json j = nlohmann::json::parse(matrix_to_json(m).dump());
  CHECK(matrix_from_json(j) == m);
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("estimate on independent columns with a large tau") {
  const fs::path dir = temp_dir();
  const Matrix x = sample_gaussian_raw(SymMatrix::identity(2, MatrixRole::covariance), 500, 3);
  write_matrix_csv(dir / "indep.csv", x, "u,v");
  const CliRun r = run({"estimate", "--input", (dir / "indep.csv").string(), "--lambda", "0.1", "--tau", "inf"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["edges"].empty());
  CHECK(j["edge_count"] == 0);
  CHECK(j["variables"] == std::vector<std::string>{"u", "v"});
  REQUIRE(j.contains("kkt_violation"));
  REQUIRE(j.contains("iterations"));
  // Theta on the raw scale is diag(1/s_ii); its correlation form is I.
  const Matrix t = matrix_from_json(j["theta_hat"]);
  CHECK(t(0, 1) == 0.0);
}

TEST_CASE("estimate is deterministic and accepts n < p") {
  const fs::path dir = temp_dir();
  const Matrix x = sample_gaussian_raw(gen_ar1_block(30, 10, 0.9).sigma0, 20, 5);
  write_matrix_csv(dir / "wide.csv", x);
  const std::vector<std::string> args{"estimate", "--input", (dir / "wide.csv").string(), "--folds", "4",
                                      "--seed", "11", "--threads", "3"};
  const CliRun a = run(args);
  const CliRun b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["p"] == 30);
  CHECK(j["tuning"]["lambda"]["mode"] == "cv");
}

TEST_CASE("estimate reports malformed CSV as a usage error") {
  const fs::path dir = temp_dir();
  std::ofstream(dir / "bad.csv") << "1,2,3\n4,5\n";
  const CliRun r = run({"estimate", "--input", (dir / "bad.csv").string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("estimate reports MLE failure as a structured error") {
  const fs::path dir = temp_dir();
  // Two identical columns make the 2x2 correlation block singular.
  Matrix x = oracle::random_matrix(10, 3, 4);
  x.col(1) = x.col(0);
  write_matrix_csv(dir / "dup.csv", x);
  const CliRun r = run({"estimate", "--input", (dir / "dup.csv").string(), "--lambda", "0", "--tau", "0"});
  CHECK(r.code == kExitNumeric);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j.contains("error"));
}

TEST_CASE("simulate") {
  const fs::path dir = temp_dir();
  SUBCASE("one replicate") {
    const fs::path out = dir / "one.csv";
    const CliRun r = run({"simulate", "--model", "ar1_block", "--p", "10", "--n", "50", "--replicates", "1",
                          "--seed", "3", "--output", out.string()});
    REQUIRE(r.code == kExitOk);
    std::istringstream csv(slurp(out));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == 2);
    const auto summary = nlohmann::json::parse(slurp(out.string() + ".summary.json"));
    CHECK(summary["groups"].size() == 1);
  }
  SUBCASE("invalid family is a config error") {
    const CliRun r = run({"simulate", "--model", "banded", "--p", "10", "--n", "50"});
    CHECK(r.code == kExitUsage);
  }
  SUBCASE("config file") {
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"model":{"family":"exp_decay","p":8},"n_values":[30,60],"replicates":2,
                              "lambda":"rate:1","tau":"rate:1","seed":5})";
    const CliRun r = run({"simulate", "--config", cfg.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("replicate,seed,n,family", 0) == 0);
  }
  SUBCASE("timing column is opt-in") {
    const CliRun r = run({"simulate", "--model", "exp_decay", "--p", "6", "--n", "30", "--timing"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("runtime_ms") != std::string::npos);
  }
}

TEST_CASE("diagnose") {
  const fs::path dir = temp_dir();
  write_matrix_csv(dir / "id.csv", Matrix::Identity(4, 4));
  const CliRun r = run({"diagnose", "--input", (dir / "id.csv").string(), "--n", "100", "--m", "2"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["sparsity"]["total"] == 0);
  CHECK(j["sigma0_eigenvalues"]["min"] == 1.0);
  CHECK(j["sparse_eigenvalues"]["rho_max"] == 1.0);

  const CliRun e = run({"diagnose", "--model", "exp_decay", "--p", "30", "--n", "100"});
  REQUIRE(e.code == kExitOk);
  const auto per_node = nlohmann::json::parse(e.out)["sparsity"]["per_node"];
  for (int i = 3; i < 27; ++i) CHECK(per_node[i] == per_node[3]);

  CHECK(run({"diagnose", "--model", "exp_decay", "--p", "30"}).code == kExitUsage);

  Matrix bad = Matrix::Identity(3, 3);
  bad(0, 1) = bad(1, 0) = 2.0;
  write_matrix_csv(dir / "bad_theta.csv", bad);
  CHECK(run({"diagnose", "--input", (dir / "bad_theta.csv").string(), "--n", "10"}).code == kExitNumeric);
}

TEST_CASE("help and unknown flags") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"estimate", "--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
}

TEST_CASE("experiment rows and quartiles") {
  const Quartiles q = quartiles({4, 1, 3, 2, std::nan("")});
  CHECK(q.q1 == 1.75);
  CHECK(q.median == 2.5);
  CHECK(q.q3 == 3.25);

  ExperimentConfig c;
  c.model.family = ModelFamily::ar1_block;
  c.model.p = 10;
  c.n_values = {40, 80};
  c.replicates = 3;
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 6);
  CHECK(rows[3].n == 80);
  CHECK(rows[3].replicate == 0);
  const auto s = summarize(rows, c);
  CHECK(s["groups"][1]["n"] == 80);
}
