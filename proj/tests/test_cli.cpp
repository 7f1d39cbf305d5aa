#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rfpca;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(RFPCA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch area with a two-group toy CSV, removed on destruction.
struct Scratch {
  fs::path dir;
  fs::path csv;

  Scratch() {
    dir = fs::temp_directory_path() /
          ("rfpca_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
    csv = dir / "toy.csv";
    Dataset ds = testutil::toy_dataset(200, 100, 7);
    std::ofstream out(csv);
    out.precision(17);
    out << "x1,x2,group\n";
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
      out << ds.X(i, 0) << ',' << ds.X(i, 1) << ',' << (ds.A[i] == 0 ? "g0" : "g1")
          << '\n';
    }
  }
  ~Scratch() { fs::remove_all(dir); }

  static int& counter() {
    static int c = 0;
    return c;
  }

  std::string base_args(const std::string& sub, const std::string& out_name) const {
    return sub + " --input " + csv.string() + " --attr group --k 1 --iters 60" +
           " --restarts 2 --seed 3 --out " + (dir / out_name).string();
  }
};

}  // namespace

TEST_CASE("fit writes model and reports") {
  Scratch s;
  const int rc = run_cli(s.base_args("fit", "fit_out") +
                         " --lambda 0.1 --alpha 0.1 --split 0.7");
  CHECK(rc == 0);
  const fs::path out = s.dir / "fit_out";
  json model = json::parse(slurp(out / "model.json"));
  CHECK(model["version"] == 1);
  CHECK(model["provenance"] == "robust-fair");
  CHECK(model["k"] == 1);
  CHECK(model["lambda"] == 0.1);
  CHECK(model["alpha"] == 0.1);
  CHECK(model["V"].size() == 2);     // d rows
  CHECK(model["V"][0].size() == 1);  // k columns
  CHECK(model["center"].size() == 2);
  CHECK(model["group_names"] == json({"g0", "g1"}));

  for (const char* name : {"report_train.json", "report_test.json"}) {
    json rep = json::parse(slurp(out / name));
    CHECK(rep.contains("are"));
    CHECK(rep.contains("group_errors"));
    CHECK(rep.contains("abdiff"));
    CHECK(rep.contains("unfairness"));
    CHECK(rep["group_errors"].size() == 2);
    CHECK(rep["are"].get<double>() >= 0.0);
  }
}

TEST_CASE("fit is deterministic in the seed") {
  Scratch s;
  const std::string args =
      " --lambda 0.2 --alpha 0.05 --split 0.7";
  CHECK(run_cli(s.base_args("fit", "a") + args) == 0);
  CHECK(run_cli(s.base_args("fit", "b") + args) == 0);
  CHECK(slurp(s.dir / "a" / "model.json") == slurp(s.dir / "b" / "model.json"));
}

TEST_CASE("pca baseline") {
  Scratch s;
  CHECK(run_cli(s.base_args("pca", "pca_out") + " --split 0.7") == 0);
  json model = json::parse(slurp(s.dir / "pca_out" / "model.json"));
  CHECK(model["provenance"] == "nominal-pca");
  CHECK(model["lambda"] == 0.0);
  CHECK_FALSE(model.contains("U"));
}

TEST_CASE("sweep emits the CSV contract and the plot") {
  Scratch s;
  const int rc = run_cli(s.base_args("sweep", "sweep_out") +
                         " --lambda 0 0.2 --alpha 0.05 0.1 --split 0.7");
  CHECK(rc == 0);
  const std::string csv = slurp(s.dir / "sweep_out" / "sweep.csv");
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "lambda,alpha,are,abdiff,objective,seconds,status");
  int rows = 0;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);
  CHECK(csv.find(",ok") != std::string::npos);
  CHECK(slurp(s.dir / "sweep_out" / "sweep.svg").find("</svg>") != std::string::npos);
}

TEST_CASE("sweep marks impossible grid points invalid and keeps going") {
  Scratch s;
  // lambda = 0.9 exceeds both group probabilities; a huge alpha kills the
  // eigenvalue bound as well.
  const int rc = run_cli(s.base_args("sweep", "sweep_bad") +
                         " --lambda 0 0.9 --alpha 50 --split 0.7");
  CHECK(rc == 0);
  const std::string csv = slurp(s.dir / "sweep_bad" / "sweep.csv");
  CHECK(csv.find(",invalid") != std::string::npos);
}

TEST_CASE("cv selects a grid point and writes cv.json") {
  Scratch s;
  const int rc = run_cli(s.base_args("cv", "cv_out") +
                         " --lambda 0 0.1 --alpha 0.05 --folds 2 --split 0.7");
  CHECK(rc == 0);
  json cv = json::parse(slurp(s.dir / "cv_out" / "cv.json"));
  CHECK(cv["grid"].size() == 2);
  CHECK(cv["selected"].contains("lambda"));
  CHECK(cv["selected"].contains("mean_score"));
  CHECK(cv["report_train"].contains("are"));
  json model = json::parse(slurp(s.dir / "cv_out" / "model.json"));
  CHECK(model["lambda"] == cv["selected"]["lambda"]);
}

TEST_CASE("fairtest reports the rank decision") {
  Scratch s;
  CHECK(run_cli(s.base_args("fairtest", "ft_out")) == 0);
  json ft = json::parse(slurp(s.dir / "ft_out" / "fairtest.json"));
  CHECK(ft["k"] == 1);
  CHECK(ft["pairs"].size() == 1);
  CHECK(ft["pairs"][0].contains("exists"));
  CHECK(ft.contains("exists_all_pairs"));
}

TEST_CASE("validation failures exit with code 2") {
  Scratch s;
  CHECK(run_cli("fit --input /nonexistent.csv --attr group --k 1 --out " +
                (s.dir / "x").string()) == 2);
  CHECK(run_cli("fit --input " + s.csv.string() + " --k 1 --out " +
                (s.dir / "y").string()) == 2);  // no attribute column given
  CHECK(run_cli("fit --input " + s.csv.string() +
                " --attr nope --k 1 --out " + (s.dir / "z").string()) == 2);
}

TEST_CASE("condition failures exit with code 3") {
  Scratch s;
  CHECK(run_cli(s.base_args("fit", "bad") + " --lambda 0.9 --alpha 50") == 3);
}
