#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pgroup/cli.hpp"

using namespace pgroup;
namespace fs = std::filesystem;

namespace {

  struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
  };

  Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "pgroup");
    std::vector<char const*> argv;
    for (auto const& a : args) {
      argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
  }

  fs::path fresh_dir(std::string const& name) {
    auto const d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }

}  // namespace

TEST_CASE("Usage errors exit with 2", "[cli]") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"--format", "xml", "classify", "--p", "5"}).code == 2);
  CHECK(run_cli({"--workers", "0", "classify", "--p", "5"}).code == 2);
  CHECK(run_cli({"classify"}).code == 2);
  CHECK(run_cli({"classify", "--p", "9"}).code == 2);
  CHECK(run_cli({"classify", "--p", "7", "--mode", "both"}).code == 2);
  CHECK(run_cli({"classify", "--p", "5", "--mode", "often"}).code == 2);
  CHECK(run_cli({"mu", "Foo@5"}).code == 2);
  CHECK(run_cli({"mu", "file:/nonexistent/group.txt"}).code == 2);
  CHECK(run_cli({"iso", "Q@5"}).code == 2);
  auto const bad = run_cli({"canon", "Q@4:(1,1,1,1)"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("Help exits with 0", "[cli]") {
  auto const o = run_cli({"--help"});
  CHECK(o.code == 0);
  CHECK(o.out.find("classify") != std::string::npos);
}

TEST_CASE("mu subcommand", "[cli]") {
  auto const o = run_cli({"--format", "json", "mu", "Q16@2"});
  REQUIRE(o.code == 0);
  auto const j = nlohmann::json::parse(o.out);
  CHECK(j["degree"] == 16);
  CHECK(j["order"] == 16);
  std::uint64_t sum = 0;
  for (auto const& orb : j["orbits"]) {
    sum += orb["index"].get<std::uint64_t>();
  }
  CHECK(sum == 16);
  auto const ex = run_cli({"mu", "--strategy", "exhaustive", "params:Q@5:(0,0,2,0)"});
  CHECK(ex.code == 0);
  CHECK(ex.out.find("degree 50") != std::string::npos);
}

TEST_CASE("Groups can be read from presentation files", "[cli]") {
  auto const d = fresh_dir("pgroup_cli_file_test");
  auto const path = d / "q16.txt";
  std::ofstream(path) << build_quotient("Q16", 2).to_text();
  auto const o = run_cli({"mu", "file:" + path.string()});
  CHECK(o.code == 0);
  CHECK(o.out.find("degree 16") != std::string::npos);
  std::ofstream(d / "junk.txt") << "not a presentation\n";
  CHECK(run_cli({"mu", "file:" + (d / "junk.txt").string()}).code == 2);
  fs::remove_all(d);
}

TEST_CASE("classify subcommand", "[cli]") {
  auto const one = run_cli({"--format", "json", "classify", "--p", "5"});
  REQUIRE(one.code == 0);
  auto const j = nlohmann::json::parse(one.out);
  CHECK(j["totals"]["overall_count"] == 11);
  auto const four = run_cli({"--format", "json", "--workers", "4", "classify", "--p", "5"});
  CHECK(four.code == 0);
  CHECK(four.out == one.out);
  auto const text = run_cli({"classify", "--p", "7"});
  CHECK(text.code == 0);
  CHECK(text.out.find("status ok") != std::string::npos);
  auto const csv = run_cli({"--format", "csv", "classify", "--p", "11"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("prime,family,label,", 0) == 0);
}

TEST_CASE("canon subcommand", "[cli]") {
  auto const o = run_cli({"canon", "params:Q@5:(2,3,1,4)"});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("label P9(3)") != std::string::npos);
  CHECK(o.out.find("trail C(2),A(3),D") != std::string::npos);
  auto const j = nlohmann::json::parse(run_cli({"--format", "json", "canon", "Qzeta:1@5:(2,3,4)"}).out);
  CHECK(j["label"] == "P7(1)");
}

TEST_CASE("iso subcommand", "[cli]") {
  auto const yes = run_cli({"--format", "json", "iso", "params:Q@5:(2,3,1,4)", "params:Q@5:(1,0,1,3)"});
  REQUIRE(yes.code == 0);
  auto const j = nlohmann::json::parse(yes.out);
  CHECK(j["isomorphic"] == true);
  CHECK(j["images"].size() == 5);
  auto const no = run_cli({"iso", "params:Q@5:(2,3,1,4)", "params:Q@5:(1,0,1,1)"});
  CHECK(no.code == 0);
  CHECK(no.out.find("isomorphic no") != std::string::npos);
  CHECK(no.out.find("method fingerprint") != std::string::npos);
  auto const budget = run_cli({"--budget", "1", "iso", "params:Q@5:(2,3,1,4)", "params:Q@5:(1,0,1,3)"});
  CHECK(budget.code == 3);
  CHECK(budget.err.find("exceeded") != std::string::npos);
}

TEST_CASE("cross-check and verify subcommands", "[cli]") {
  auto const cc = run_cli({"cross-check", "--p", "5"});
  CHECK(cc.code == 0);
  CHECK(cc.out.find("perfect yes") != std::string::npos);
  CHECK(run_cli({"cross-check", "--p", "3"}).code == 2);
  auto const v = run_cli({"verify", "--p", "3"});
  CHECK(v.code == 0);
  CHECK(v.out.find("criterion 5 PASS") != std::string::npos);
  CHECK(v.out.find("criterion 6 SKIP") != std::string::npos);
  CHECK(v.out.find("FAIL") == std::string::npos);
}

TEST_CASE("Lattice cache directory", "[cli]") {
  SECTION("from the option") {
    auto const d = fresh_dir("pgroup_cli_cache_opt");
    CHECK(run_cli({"--cache-dir", d.string(), "mu", "params:Q@3:(1,0,1,1)"}).code == 0);
    CHECK_FALSE(fs::is_empty(d));
    fs::remove_all(d);
  }
  SECTION("from the environment") {
    auto const d = fresh_dir("pgroup_cli_cache_env");
    ::setenv("PGROUP_CACHE_DIR", d.string().c_str(), 1);
    auto const o = run_cli({"mu", "params:Q@3:(1,1,0,1)"});
    ::unsetenv("PGROUP_CACHE_DIR");
    CHECK(o.code == 0);
    CHECK_FALSE(fs::is_empty(d));
    fs::remove_all(d);
  }
}
