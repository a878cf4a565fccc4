#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"

using testsupport::fixture_path;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dsirs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dsirs_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("solve on the worked example") {
  const auto r = run({"solve", "--instance", fixture_path("alex_belle"), "--objective", "rho"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["objective"] == "1/1");
  CHECK(j["plans"][0]["s0"] == nlohmann::json::array({"r1"}));
  CHECK(j["solver"] == "exact-awns");
  CHECK(j["cost"] == 1);
}

TEST_CASE("fptas on the worked example") {
  const auto r = run({"fptas", "--instance", fixture_path("alex_belle"), "--epsilon", "0.1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["objective"] == "1/1");
  CHECK(j["epsilon"] == "1/10");
  CHECK(j["solver"] == "fptas");
  const auto v = run({"fptas", "--instance", fixture_path("alex_belle"), "--epsilon", "1/10", "--verbose",
                      "--exhaustive-guesses", "--o2", "price"});
  CHECK(v.code == 0);
  CHECK(v.err.find("dp_passes") != std::string::npos);
}

TEST_CASE("validate") {
  const auto bad = run({"validate", "--instance", fixture_path("unequal_totals")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("UnequalTotals") != std::string::npos);
  const auto ok = run({"validate", "--instance", fixture_path("alex_belle")});
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["valid"] == true);
}

TEST_CASE("aw reports the classic split and the derived plan") {
  const auto r = run({"aw", "--instance", fixture_path("alex_belle")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["classic"]["split"]["resource"] == "r1");
  CHECK(j["classic"]["split"]["retained"] == "50/53");
  CHECK(j["derived"]["halted_by"] == "split-guard");
  const auto s = nlohmann::json::parse(run({"aw", "--instance", fixture_path("alex_belle"), "--sell", "r1"}).out);
  CHECK(s["derived"]["halted_by"] == "revenue-guard");
  CHECK(s["derived"]["welfare"]["w1"] == "52/1");
  CHECK(s["derived"]["plan"]["q"] == "4/25");
  CHECK(run({"aw", "--instance", fixture_path("alex_belle"), "--sell", "r9"}).code == 1);
}

TEST_CASE("oracle criteria") {
  const auto e = run({"oracle", "--instance", fixture_path("envy_impossible"), "--criterion", "envy-free"});
  REQUIRE(e.code == 0);
  CHECK(nlohmann::json::parse(e.out)["exists"] == false);
  const auto d = run({"oracle", "--instance", fixture_path("d_vs_rho"), "--criterion", "min-rho"});
  REQUIRE(d.code == 0);
  CHECK(nlohmann::json::parse(d.out)["objective"] == "99/92");
  CHECK(nlohmann::json::parse(d.out)["solver"] == "oracle");
  const auto any = run({"oracle", "--instance", fixture_path("conflicts"), "--criterion", "envy-free", "--any-q"});
  CHECK(nlohmann::json::parse(any.out)["exists"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run({"solve", "--instance", fixture_path("d_vs_rho"), "--objective", "d-c", "--threshold", "0"}).code == 2);
  CHECK(run({"solve", "--instance", fixture_path("d_vs_rho"), "--objective", "d-c"}).code == 1);
  CHECK(run({"solve", "--instance", "/nonexistent.json", "--objective", "d"}).code == 1);
  CHECK(run({"solve", "--instance", fixture_path("alex_belle"), "--objective", "median"}).code == 1);
  CHECK(run({"fptas", "--instance", fixture_path("alex_belle"), "--epsilon", "0"}).code == 1);
  CHECK(run({"fptas", "--instance", fixture_path("alex_belle"), "--epsilon", "x"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  const auto nw = run({"solve", "--instance", fixture_path("alex_belle"), "--objective", "nw"});
  CHECK(nw.code == 0);
  const auto rc = run({"solve", "--instance", fixture_path("alex_belle"), "--objective", "rho-c", "--threshold", "1"});
  CHECK(rc.code == 0);
  CHECK(nlohmann::json::parse(rc.out)["objective"] == "1/1");
}

TEST_CASE("outputs round-trip and repeat exactly") {
  const auto a = run({"oracle", "--instance", fixture_path("conflicts"), "--criterion", "min-d"});
  const auto b = run({"oracle", "--instance", fixture_path("conflicts"), "--criterion", "min-d"});
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(nlohmann::json::parse(j.dump()) == j);
  CHECK(j["objective"] == "0/1");
}

TEST_CASE("gen and simulate write deterministic files") {
  const auto dir = scratch("sim");
  const auto data = (dir / "data.csv").string();
  REQUIRE(run({"gen", "--count", "6", "--seed", "3", "--out", data}).code == 0);
  const auto first = (dir / "one").string(), second = (dir / "two").string();
  const auto r1 = run({"simulate", "--data", data, "--out", first, "--seed", "42", "--epsilon", "0.1"});
  REQUIRE(r1.code == 0);
  CHECK(nlohmann::json::parse(r1.out).contains("records"));
  REQUIRE(run({"--jobs", "2", "simulate", "--data", data, "--out", second}).code == 0);
  const auto results = slurp(std::filesystem::path(first) / "results.csv");
  CHECK(results == slurp(std::filesystem::path(second) / "results.csv"));
  CHECK(slurp(std::filesystem::path(first) / "aggregates.csv") ==
        slurp(std::filesystem::path(second) / "aggregates.csv"));
  CHECK(std::count(results.begin(), results.end(), '\n') == 1 + 6 * 6 * 8);

  const auto synth = (dir / "syn").string();
  REQUIRE(run({"simulate", "--synthetic", "3", "--out", synth}).code == 0);
  CHECK(std::filesystem::exists(std::filesystem::path(synth) / "aggregates.csv"));

  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"budgets": [0, 4], "modes": [["avg", "avg"]]})";
  const auto cfg_out = (dir / "cfg").string();
  REQUIRE(run({"simulate", "--config", cfg.string(), "--synthetic", "2", "--out", cfg_out}).code == 0);
  const auto small = slurp(std::filesystem::path(cfg_out) / "results.csv");
  CHECK(std::count(small.begin(), small.end(), '\n') == 1 + 2 * 2);

  CHECK(run({"simulate", "--out", (dir / "none").string()}).code == 1);
  std::ofstream(dir / "bad.csv") << "instance,a\n250,250,250,251\n";
  CHECK(run({"simulate", "--data", (dir / "bad.csv").string(), "--out", (dir / "bad").string()}).code == 1);
  std::filesystem::remove_all(dir);
}
