#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "runner.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = spanlab::cli;

namespace {

const std::string tool = SPANLAB_CLI;
const std::string configs = SPANLAB_CONFIGS;

int shell(const std::string& args) {
  const int status = std::system((tool + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
  std::random_device rd;
  const auto dir = fs::temp_directory_path() / ("spanlab-cli-" + std::to_string(rd()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("reports carry the common fields") {
  const auto r = cli::run({{"check", "segal"}, {"base", "finset:2"}, {"arities", {2}}});
  CHECK(r.at("verdict") == "verified");
  CHECK(r.at("exit_code") == 0);
  CHECK(r.at("schema_version") == cli::schema_version);
  CHECK(r.at("tool_version") == cli::tool_version());
  CHECK(r.at("seed") == cli::default_seed);
  CHECK(r.at("check") == "segal");
  CHECK(r.contains("timing_ms"));
  CHECK(r.contains("witness"));
  CHECK(r.at("request").at("base") == "finset:2");
  CHECK_FALSE(cli::without_timing(r).contains("timing_ms"));
}

TEST_CASE("schema violations become error reports") {
  const json bad[] = {
      {{"check", "segal"}, {"base", "finset:2"}, {"arities", {2}}, {"colour", "red"}},
      {{"check", "nonsense"}},
      {{"check", "segal"}, {"base", "finset:2"}, {"arities", "2"}},
      {{"check", "segal"}, {"base", "finset:2"}, {"arities", {2}}, {"seed", -1}},
      {{"check", "lag"}, {"property", "closure"}, {"samples", "many"}},
      json::array(),
  };
  for (const auto& req : bad) {
    INFO(req.dump());
    const auto r = cli::run(req);
    CHECK(r.at("verdict") == "error");
    CHECK(r.at("exit_code") == 3);
    CHECK_FALSE(r.at("diagnostic").get<std::string>().empty());
    CHECK_THROWS(cli::validate_request(req));
  }
}

TEST_CASE("resource limits are inconclusive") {
  const auto r = cli::run({{"check", "level"}, {"base", "finset:5"}, {"arities", {1}}});
  CHECK(r.at("verdict") == "inconclusive");
  CHECK(r.at("exit_code") == 2);
}

TEST_CASE("reports are reproducible") {
  const json reqs[] = {
      {{"check", "adjoint"}, {"base", "finset:3"}, {"samples", 20}, {"seed", 7}},
      {{"check", "lag"}, {"property", "closure"}, {"samples", 20}, {"max_total_dim", 8}},
      {{"check", "locsys"}, {"coefficients", "cyclic:2"}, {"property", "composition"}, {"base", "finset:2"},
       {"bound", 2}, {"samples", 30}},
  };
  for (const auto& req : reqs) {
    INFO(req.dump());
    const auto a = cli::run(req);
    const auto b = cli::run(req);
    CHECK(a.at("verdict") == "verified");
    CHECK(cli::dump(cli::without_timing(a)) == cli::dump(cli::without_timing(b)));
  }
}

TEST_CASE("suites") {
  const auto empty = cli::run_suite(cli::load_json_file(configs + "/empty.json"));
  CHECK(empty.reports.empty());
  CHECK(empty.verdict == spanlab::Verdict::verified);

  const auto bad = cli::run_suite(cli::load_json_file(configs + "/corrupted.json"), 2);
  REQUIRE(bad.reports.size() == 2);
  CHECK(cli::report_verdict(bad.reports[0]) == spanlab::Verdict::verified);
  CHECK(cli::report_verdict(bad.reports[1]) == spanlab::Verdict::refuted);
  CHECK(bad.verdict == spanlab::Verdict::refuted);
  CHECK(bad.summary.at("exit_code") == 1);

  const auto serial = cli::run_suite(cli::load_json_file(configs + "/corrupted.json"), 1);
  CHECK(cli::without_timing(serial.reports[1]) == cli::without_timing(bad.reports[1]));
}

TEST_CASE("exit codes of the command-line tool") {
  CHECK(shell("--help") == 0);
  CHECK(shell("shapes sigma 2") == 0);
  CHECK(shell("shapes cube 2") == 3);
  CHECK(shell("check segal --base finset:2 --arities 2") == 0);
  CHECK(shell("check segal --base finset:2 --arities 2 --corrupt") == 1);
  CHECK(shell("lag check --zigzag 2 4") == 0);
  CHECK(shell("suite " + configs + "/empty.json") == 0);
  CHECK(shell("suite " + configs + "/corrupted.json") == 1);

  const auto dir = scratch();
  const auto base = dir / "base.json";
  std::ofstream(base) << "{\"objects\": [\"a\"";
  CHECK(shell("check segal --arities 2 --base " + base.string()) == 3);
  std::ofstream(base) << R"({"objects": ["a"], "morphisms": [{"id": "1a", "src": "a", "tgt": "a"}],
    "identities": {"a": "1a"}, "compose": [["1a", "1a", "1a"]]})";
  CHECK(shell("check segal --arities 2 --base " + base.string()) == 0);
  fs::remove_all(dir);
}

TEST_CASE("the tool writes stable report files") {
  const auto dir = scratch();
  REQUIRE(shell("check segal --base finset:2 --arities 2 --out " + (dir / "a.json").string()) == 0);
  REQUIRE(shell("check segal --base finset:2 --arities 2 --out " + (dir / "b.json").string()) == 0);
  auto a = json::parse(slurp(dir / "a.json"));
  auto b = json::parse(slurp(dir / "b.json"));
  CHECK(cli::without_timing(a) == cli::without_timing(b));
  CHECK(slurp(dir / "a.json") == cli::dump(a));

  REQUIRE(shell("suite " + configs + "/corrupted.json --out " + (dir / "suite").string()) == 1);
  CHECK(fs::exists(dir / "suite" / "summary.json"));
  const auto summary = json::parse(slurp(dir / "suite" / "summary.json"));
  CHECK(summary.at("verdict") == "refuted");
  CHECK(summary.at("entries").size() == 2);
  fs::remove_all(dir);
}
