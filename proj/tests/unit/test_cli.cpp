// Copyright 2026 The rsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "rsp/io.hpp"

using namespace rsp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("rsp_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path log = scratch() / "stdout.txt";
  const std::string cmd = env + " " + std::string(RSP_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(log);
  return r;
}

std::string write_problem(const std::string& name, const RobustProblem& p) {
  const fs::path path = scratch() / name;
  write_json_file(path.string(), problem_to_json(p));
  return path.string();
}

}  // namespace

TEST_CASE("gen is deterministic and round-trips") {
  const std::string a = (scratch() / "a.json").string();
  const std::string b = (scratch() / "b.json").string();
  REQUIRE(run("gen --n 10 --K 10 --L 10 --m 3 --seed 7 --out " + a).code == 0);
  REQUIRE(run("gen --n 10 --K 10 --L 10 --m 3 --seed 7 --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
  const Run c = run("gen --n 3 --K 2 --L 2 --m 1 --out " + (scratch() / "c.json").string(),
                    "RSP_SEED=7");
  const Run d = run("gen --n 3 --K 2 --L 2 --m 1 --seed 7 --out " + (scratch() / "d.json").string());
  CHECK(c.code == 0);
  CHECK(slurp(scratch() / "c.json") == slurp(scratch() / "d.json"));
  CHECK(c.out.find("stacked_norm 1.000000000000") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("gen --n 10 --K 10 --L 10 --out x.json").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("solve --algo nope --instance x.json").code == 2);
  CHECK(run("solve --algo sgsp --instance /nonexistent/file.json").code == 2);
}

TEST_CASE("solve sgsp on the 1-D robust LP") {
  const std::string inst = write_problem("lp1.json", fixtures::lp_1d());
  const std::string csv1 = (scratch() / "t1.csv").string();
  const std::string csv2 = (scratch() / "t2.csv").string();
  const Run r = run("solve --algo sgsp --instance " + inst + " --out " + csv1);
  CHECK(r.code == 0);
  CHECK(r.out.find("feasibility_gap:") != std::string::npos);
  REQUIRE(run("solve --algo sgsp --instance " + inst + " --out " + csv2).code == 0);
  const std::string a = slurp(csv1), b = slurp(csv2);
  CHECK(a.rfind("iter,elapsed_s,obj,feas_gap,ogr,cert_bound", 0) == 0);
  // Identical apart from the wall-clock column.
  auto strip = [](const std::string& s) {
    std::stringstream in(s);
    std::string line, out;
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      out += line.substr(0, c1) + line.substr(c2) + "\n";
    }
    return out;
  };
  CHECK(strip(a) == strip(b));
}

TEST_CASE("solve with the other algorithms") {
  const std::string lp = write_problem("lp1b.json", fixtures::lp_1d());
  CHECK(run("solve --algo papc --instance " + write_problem("toy.json", fixtures::papc_toy()) +
            " --budget 10000")
            .code == 0);
  CHECK(run("solve --algo cutting-planes --instance " + lp).code == 0);
  CHECK(run("solve --algo fo-pess --instance " + lp).code == 0);
  const Run tiny = run("solve --algo cutting-planes --instance " + lp + " --budget 1");
  CHECK(tiny.code == 3);
}

TEST_CASE("papc on a quadratic instance is rejected") {
  const std::string q = (scratch() / "q.json").string();
  REQUIRE(run("gen --n 3 --K 2 --L 2 --m 1 --seed 1 --out " + q).code == 0);
  const Run r = run("solve --algo papc --instance " + q);
  CHECK(r.code == 2);
  CHECK(r.out.find("NotBiaffine") != std::string::npos);
}

TEST_CASE("project prints the perspective-cone projection") {
  const Run r = run("project --set l2 --radius 1 --point 3,0 --lambda 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("mu: 2") != std::string::npos);
  CHECK(r.out.find("P_U: z_tilde [2, 0] lambda 2") != std::string::npos);
  const Run in = run("project --set box --lo -1,-1 --hi 1,1 --point 0.5,0.25 --lambda 1");
  CHECK(in.out.find("P_U: z_tilde [0.5, 0.25] lambda 1") != std::string::npos);
  const Run apex = run("project --set l1 --radius 1 --point 0.1,0.1 --lambda -3");
  CHECK(apex.out.find("lambda 0") != std::string::npos);
  CHECK(run("project --set simplex --radius 1 --point 1,1 --lambda 1").code == 2);
}

TEST_CASE("config file values yield to flags") {
  const std::string lp = write_problem("lp1c.json", fixtures::lp_1d());
  const fs::path cfg = scratch() / "solve.cfg";
  std::ofstream(cfg) << "# solve settings\nalgo=cutting-planes\nbudget=1\n";
  CHECK(run("solve --config " + cfg.string() + " --instance " + lp).code == 3);
  CHECK(run("solve --config " + cfg.string() + " --instance " + lp + " --budget 50").code == 0);
  CHECK(run("--workdir " + scratch().string() +
            " solve --config solve.cfg --instance lp1c.json --budget 50")
            .code == 0);
}

TEST_CASE("bench on a single cell") {
  const fs::path cfg = scratch() / "bench.cfg";
  std::ofstream(cfg) << "n=4\nK=2\nL=2\nm=1\nseeds=1\nalgorithms=sgsp\niter_budget=500\n";
  const fs::path out = scratch() / "bench_out";
  const Run r = run("bench --config " + cfg.string() + " --out-dir " + out.string() + " --jobs 1");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "summary.json"));
  int csvs = 0;
  for (const auto& e : fs::directory_iterator(out))
    if (e.path().extension() == ".csv") ++csvs;
  CHECK(csvs == 1);
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  REQUIRE(j.contains("cells"));
  REQUIRE(j["cells"].size() == 1);
  const auto& minima = j["cells"][0]["minima"];
  double prev_fg = 1e300;
  for (const auto& m : minima) {
    if (!m["min_fg"].is_number()) continue;
    const double fg = m["min_fg"].get<double>();
    CHECK(fg <= prev_fg);
    prev_fg = fg;
  }
}
