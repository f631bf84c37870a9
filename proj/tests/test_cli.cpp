#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <cstdlib>

#include "amulab/cli.hpp"
#include "amulab/io.hpp"
#include "amulab/parallel.hpp"

using namespace amulab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("amulab_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen writes hermite and spin tuples; bad spin exits 2") {
  TempDir dir;
  const std::string out = dir.file("t.json");
  CHECK(cli::run({"gen", "--kind", "hermite_xp", "--N", "128", "--hbar",
                  "0.01", "--out", out}) == 0);
  const auto t = io::tuple_from_json(io::load_json(out));
  CHECK(t.n() == 2);
  CHECK(t.dim() == 128);

  const std::string spin = dir.file("spin.json");
  CHECK(cli::run({"gen", "--kind", "angular_momentum", "--j", "1", "--hbar",
                  "0.1", "--out", spin}) == 0);
  CHECK(io::tuple_from_json(io::load_json(spin)).n() == 3);

  CHECK(cli::run({"gen", "--kind", "angular_momentum", "--j", "0.3", "--hbar",
                  "0.1", "--out", dir.file("bad.json")}) == 2);
  CHECK_FALSE(fs::exists(dir.file("bad.json")));
}

TEST_CASE("gen accepts a descriptor file and the random kind") {
  TempDir dir;
  const std::string desc = dir.file("desc.json");
  io::write_json_atomic(
      desc, {{"kind", "commuting_diagonal"},
             {"dim", 4},
             {"points", {{0.25, -0.5}, {1.0, 0.75}}}});
  const std::string out = dir.file("diag.json");
  CHECK(cli::run({"gen", "--descriptor", desc, "--out", out}) == 0);
  CHECK(io::tuple_from_json(io::load_json(out)).dim() == 4);

  const std::string rnd = dir.file("rnd.json");
  CHECK(cli::run({"gen", "--kind", "random", "--n", "2", "--dim", "8",
                  "--delta", "0.05", "--seed", "7", "--out", rnd}) == 0);
  CHECK(io::tuple_from_json(io::load_json(rnd)).n() == 2);
}

TEST_CASE("spectrum matches the committed golden CSV") {
  TempDir dir;
  const std::string data = AMULAB_TEST_DATA_DIR;
  const std::string out = dir.file("spec.json");
  const std::string csv = dir.file("spec.csv");
  CHECK(cli::run({"spectrum", "--tuple", data + "/commuting_fixture.json",
                  "--M", "1.5", "--eta", "0.25", "--variant", "euclidean",
                  "--out", out, "--csv", csv}) == 0);
  CHECK(slurp(csv) == slurp(data + "/commuting_fixture_spectrum.csv"));
}

TEST_CASE("spectrum validates parameters before writing anything") {
  TempDir dir;
  const std::string data = AMULAB_TEST_DATA_DIR;
  const std::string out = dir.file("never.json");
  CHECK(cli::run({"spectrum", "--tuple", data + "/commuting_fixture.json",
                  "--M", "1.5", "--eta", "1.5", "--variant", "euclidean",
                  "--out", out}) == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(cli::run({"spectrum", "--tuple", data + "/commuting_fixture.json",
                  "--M", "0.5", "--eta", "0.25", "--variant", "euclidean",
                  "--out", out}) == 2);
}

TEST_CASE("full gen -> spectrum -> amu pipeline with exit codes") {
  TempDir dir;
  const std::string t = dir.file("t.json");
  const std::string s = dir.file("s.json");
  const std::string w = dir.file("w.json");
  REQUIRE(cli::run({"gen", "--kind", "hermite_xp", "--N", "96", "--hbar",
                    "0.01", "--out", t}) == 0);
  REQUIRE(cli::run({"spectrum", "--tuple", t, "--M", "1.5", "--eta", "0.2",
                    "--variant", "euclidean", "--out", s}) == 0);
  CHECK(cli::run({"amu", "--tuple", t, "--spectrum", s, "--epsilon", "0.3",
                  "--out", w}) == 0);
  const auto report = io::load_json(w);
  CHECK(report.at("all_pass") == true);
  CHECK(report.at("witnesses").size() > 0);

  // epsilon = 0 rejects everything: reportable counter-evidence, exit 1
  CHECK(cli::run({"amu", "--tuple", t, "--spectrum", s, "--epsilon", "0",
                  "--out", dir.file("w0.json")}) == 1);

  // single lambda target
  CHECK(cli::run({"amu", "--tuple", t, "--lambda", "0.1,0.0", "--epsilon",
                  "0.3", "--out", dir.file("w1.json")}) == 0);

  // exactly one of --spectrum / --lambda
  CHECK(cli::run({"amu", "--tuple", t, "--epsilon", "0.3", "--out",
                  dir.file("w2.json")}) == 2);
}

TEST_CASE("index subcommand reports the signed index and inconclusive gaps") {
  TempDir dir;
  const std::string out = dir.file("idx.json");
  CHECK(cli::run({"index", "--N", "96", "--hbar", "0.1", "--out", out}) == 0);
  auto j = io::load_json(out);
  CHECK(j.at("index") == 1);
  CHECK(j.at("status") == "ok");

  CHECK(cli::run({"index", "--N", "96", "--hbar", "-0.1", "--out", out}) == 0);
  CHECK(io::load_json(out).at("index") == -1);

  CHECK(cli::run({"index", "--N", "96", "--hbar", "0.1", "--threshold-ratio",
                  "1.5", "--out", out}) == 0);
  CHECK(io::load_json(out).at("status") == "inconclusive");
}

TEST_CASE("transform subcommand emits diagnostics and reusable tuples") {
  TempDir dir;
  const std::string t = dir.file("t.json");
  REQUIRE(cli::run({"gen", "--kind", "random", "--n", "2", "--dim", "8",
                    "--delta", "0.1", "--seed", "3", "--out", t}) == 0);
  const std::string b = dir.file("bounded.json");
  CHECK(cli::run({"transform", "--tuple", t, "--kind", "bounded", "--out",
                  b}) == 0);
  const auto bj = io::load_json(b);
  CHECK(bj.at("identity_residual").get<double>() <= 1e-10);
  CHECK(bj.at("b").size() == 2);

  const std::string r = dir.file("reparam.json");
  CHECK(cli::run({"transform", "--tuple", t, "--kind", "reparam", "--s", "0.5",
                  "--out", r}) == 0);
  CHECK(io::tuple_from_json(io::load_json(r)).n() == 2);  // feeds the pipeline

  CHECK(cli::run({"transform", "--tuple", t, "--kind", "nope", "--out",
                  dir.file("x.json")}) == 2);
}

TEST_CASE("verify subcommand honors config subsets and writes reports") {
  TempDir dir;
  const std::string cfg = dir.file("cfg.json");
  io::write_json_atomic(cfg, {{"criteria", {6, 7}}});
  const std::string out = dir.file("report.json");
  const std::string csv = dir.file("report.csv");
  CHECK(cli::run({"verify", "--config", cfg, "--out", out, "--csv", csv}) == 0);
  const auto report = io::load_json(out);
  CHECK(report.at("all_pass") == true);
  CHECK(report.at("criteria").size() == 2);
  CHECK(slurp(csv).find("6,pass") != std::string::npos);

  CHECK(cli::run({"verify", "--config", dir.file("absent.json"), "--out",
                  out}) == 3);
}

TEST_CASE("IO failures and malformed inputs map to distinct exit codes") {
  TempDir dir;
  CHECK(cli::run({"spectrum", "--tuple", dir.file("absent.json"), "--M", "1.5",
                  "--eta", "0.25", "--variant", "euclidean", "--out",
                  dir.file("s.json")}) == 3);

  const std::string corrupt = dir.file("corrupt.json");
  io::write_json_atomic(corrupt, {{"label", "x"}, {"ops", "not-an-array"}});
  CHECK(cli::run({"spectrum", "--tuple", corrupt, "--M", "1.5", "--eta",
                  "0.25", "--variant", "euclidean", "--out",
                  dir.file("s.json")}) == 2);

  CHECK(cli::run({"nonsense"}) == 2);
  CHECK(cli::run({}) == 2);
}

TEST_CASE("AMULAB_THREADS mirrors the --threads knob") {
  ::setenv("AMULAB_THREADS", "3", 1);
  CHECK(effective_threads(0) == 3);
  CHECK(effective_threads(5) == 5);  // explicit request wins
  ::setenv("AMULAB_THREADS", "garbage", 1);
  CHECK(effective_threads(0) >= 1);
  ::unsetenv("AMULAB_THREADS");
}

TEST_CASE("reruns reproduce identical payloads") {
  TempDir dir;
  const std::string t = dir.file("t.json");
  REQUIRE(cli::run({"gen", "--kind", "random", "--n", "2", "--dim", "8",
                    "--delta", "0.05", "--seed", "11", "--out", t}) == 0);
  const std::string s1 = dir.file("s1.json");
  const std::string s2 = dir.file("s2.json");
  REQUIRE(cli::run({"spectrum", "--tuple", t, "--M", "1.4", "--eta", "0.3",
                    "--variant", "spherical", "--out", s1}) == 0);
  REQUIRE(cli::run({"spectrum", "--tuple", t, "--M", "1.4", "--eta", "0.3",
                    "--variant", "spherical", "--out", s2}) == 0);
  CHECK(slurp(s1) == slurp(s2));
}
