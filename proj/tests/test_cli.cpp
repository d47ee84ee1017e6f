#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + DPLOT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / fs::path("dplot_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("simulate then analyze") {
  const Scratch s;
  const auto csv = s / "glued.csv";
  REQUIRE(run("simulate --copula glue:0.5:frank:-30:frank:30 --margin-x kumaraswamy:0.25,0.15 "
              "--margin-y t:3,1.5,2.5 -n 400 --seed 3 --out " + csv) == 0);
  const auto first = slurp(csv);
  CHECK(first.rfind("x,y\n", 0) == 0);
  REQUIRE(run("simulate --copula glue:0.5:frank:-30:frank:30 --margin-x kumaraswamy:0.25,0.15 "
              "--margin-y t:3,1.5,2.5 -n 400 --seed 3 --out " + (s / "again.csv")) == 0);
  CHECK(slurp(s / "again.csv") == first);

  REQUIRE(run("analyze " + csv + " --permutations 49 --seed 2 --svg " + (s / "a.svg") + " --json " +
              (s / "a.json") + " --diag-zoom " + (s / "z.svg")) == 0);
  const auto report = nlohmann::json::parse(slurp(s / "a.json"));
  CHECK(report["n"] == 400);
  CHECK(report["provenance"]["seed"] == 2);
  CHECK(slurp(s / "a.svg").find("panel-scatter") != std::string::npos);
  CHECK(slurp(s / "z.svg").find("delta-zoom") != std::string::npos);

  REQUIRE(run("analyze " + csv + " --permutations 49 --seed 2 --threads 1 --json " + (s / "b.json")) == 0);
  CHECK(slurp(s / "b.json") == slurp(s / "a.json"));

  CHECK(run("analyze " + csv + " --max-n 100 --permutations 19 --json " + (s / "c.json")) == 0);
  const auto sub = nlohmann::json::parse(slurp(s / "c.json"));
  CHECK(sub["n"] == 100);
  CHECK(sub["input_n"] == 400);
}

TEST_CASE("mixture and glue-scan") {
  const Scratch s;
  REQUIRE(run("simulate --mixture -n 500 --seed 1 --out " + (s / "mix.csv")) == 0);
  REQUIRE(run("simulate --copula glue:0.5:frank:-30:frank:30 -n 600 --seed 4 --out " + (s / "g.csv")) == 0);
  REQUIRE(run("glue-scan " + (s / "g.csv") + " --grid 0.3,0.5,0.7 --json " + (s / "scan.json")) == 0);
  const auto scan = nlohmann::json::parse(slurp(s / "scan.json"));
  CHECK(scan["candidates"].size() == 3);
  CHECK(scan["best_theta"] == 0.5);
}

TEST_CASE("gallery") {
  const Scratch s;
  REQUIRE(run("gallery -n 100 --seed 5 --out " + (s / "gal")) == 0);
  int svgs = 0;
  for (const auto& e : fs::directory_iterator(s.dir / "gal")) svgs += e.path().extension() == ".svg";
  CHECK(svgs == 25);
  const auto summary = nlohmann::json::parse(slurp(s.dir / "gal" / "gallery.json"));
  CHECK(summary["cells"].size() == 25);
}

TEST_CASE("exit codes") {
  const Scratch s;
  CHECK(run("") != 0);
  CHECK(run("--help") == 0);
  CHECK(run("analyze") == 2);
  CHECK(run("simulate --copula nonsense:1 --out " + (s / "x.csv")) == 2);
  CHECK(run("simulate --copula frank:2 --margin-x beta:1 --out " + (s / "x.csv")) == 2);
  CHECK(run("analyze " + (s / "missing.csv")) == 3);
  {
    std::ofstream(s / "short.csv") << "x,y\n1,2\n";
  }
  CHECK(run("analyze " + (s / "short.csv")) == 3);
  {
    std::ofstream(s / "bad.csv") << "x,y\n1,2\n3,oops\n";
  }
  CHECK(run("analyze " + (s / "bad.csv")) == 3);
  {
    std::ofstream(s / "tied.csv") << "x,y\n1,1\n1,2\n2,3\n3,4\n4,5\n5,6\n6,7\n7,8\n8,9\n9,9\n";
  }
  CHECK(run("analyze " + (s / "tied.csv") + " --ties error") == 3);
  CHECK(run("analyze " + (s / "tied.csv") + " --ties sideways") == 2);
  CHECK(run("analyze " + (s / "tied.csv") + " --permutations 19 --svg /nonexistent-dir/out.svg") == 3);
}
