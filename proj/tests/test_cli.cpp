#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "qanneal/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run anneal(std::vector<std::string> args) {
  args.insert(args.begin(), "anneal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qanneal::cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* root = std::getenv("QANNEAL_TEST_TMP");
  const fs::path dir = fs::path(root ? root : fs::temp_directory_path().string()) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("gibbs at N = 4 lists six microstates summing to one") {
  const Run r = anneal({"gibbs", "--n", "4", "--two-sz", "0", "--g", "0.5"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 7);
  const auto header = split(rows[0]);
  const auto col = std::find(header.begin(), header.end(), "probability") - header.begin();
  REQUIRE(col < static_cast<long>(header.size()));
  double total = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(split(rows[i])[col]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical configurations give byte-identical files") {
  const fs::path a = scratch("repro_a");
  const fs::path b = scratch("repro_b");
  const std::vector<std::vector<std::string>> commands{
      {"spectrum", "--n", "6", "--g", "0.2", "--points", "40", "--seed", "3"},
      {"evolve", "--n", "4", "--g", "0.3", "--t1", "50", "--seed", "3"},
      {"gibbs", "--n", "8", "--g-list", "0.1,0.4"},
      {"eta-dist", "--n", "200", "--g-list", "0.01,0.02"},
      {"entropy", "--n", "10", "--g-list", "0.04,0.1,0.2"},
      {"qgroup", "--g", "0.2"},
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    for (const fs::path& dir : {a, b}) {
      auto args = commands[i];
      args.push_back("--out");
      args.push_back((dir / ("run" + std::to_string(i) + ".out")).string());
      REQUIRE(anneal(args).code == 0);
    }
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path twin = b / entry.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(slurp(entry.path()) == slurp(twin));
    ++compared;
  }
  // One primary plus one manifest per command, plus sidecars.
  CHECK(compared >= 2 * commands.size());
}

TEST_CASE("every output carries a manifest with the full configuration") {
  const fs::path dir = scratch("manifest");
  const fs::path out = dir / "levels.csv";
  REQUIRE(anneal({"spectrum", "--n", "6", "--g", "0.2", "--points", "30", "--seed", "11", "--out", out.string()}).code == 0);
  const fs::path manifest = dir / "levels.csv.manifest.json";
  REQUIRE(fs::exists(manifest));
  const json m = json::parse(slurp(manifest));
  CHECK(m["version"] == qanneal::kVersion);
  CHECK(m["prng"] == "mt19937_64");
  CHECK(m["config"]["n"] == 6);
  CHECK(m["config"]["seed"] == 11);
  CHECK(m["config"]["command"] == "spectrum");
  for (const auto& name : m["outputs"]) CHECK(fs::exists(dir / name.get<std::string>()));
  CHECK(m["outputs"].size() >= 2);
}

TEST_CASE("evolve JSON holds traces and final probabilities") {
  const Run r = anneal({"evolve", "--n", "4", "--g", "0.5", "--t1", "100", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  double total = 0.0;
  for (const auto& [bits, p] : j["final_probs"].items()) {
    CHECK(bits.size() == 4);
    total += p.get<double>();
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j["norm_drift"].get<double>() <= 1e-8);
  CHECK(j["eta_trace"].size() == 200);
  CHECK(j["polarizations"].size() == 4);
  CHECK(j.contains("params"));
  CHECK(j["step_count"].get<long>() > 0);
}

TEST_CASE("exit codes") {
  const Run odd = anneal({"eta-dist", "--n", "7", "--g", "0.1"});
  CHECK(odd.code == 2);
  CHECK(odd.err.find("validation") != std::string::npos);
  CHECK(anneal({"gibbs", "--n", "5", "--two-sz", "0", "--g", "0.1"}).code == 2);
  CHECK(anneal({"gibbs", "--n", "40", "--g", "0.1"}).code == 3);
  CHECK(anneal({"gibbs", "--n", "4", "--g", "-1"}).code == 2);
  CHECK(anneal({"gibbs", "--bogus"}).code == 2);
  CHECK(anneal({"figure", "--id", "zz"}).code == 2);
  CHECK(anneal({"spectrum", "--n", "6", "--levels-file", "/nonexistent/levels.txt"}).code == 2);
}

TEST_CASE("machine-readable errors") {
  const Run r = anneal({"gibbs", "--n", "5", "--two-sz", "0", "--g", "0.1", "--error-json"});
  CHECK(r.code == 2);
  const json e = json::parse(r.err);
  CHECK(e["error"]["kind"] == "validation");
  CHECK(e["error"]["exit_code"] == 2);
  CHECK_FALSE(e["error"]["message"].get<std::string>().empty());
}

TEST_CASE("verify passes and the p- mutation fails loudly") {
  const Run ok = anneal({"verify"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const Run bad = anneal({"verify", "--perturb-p-minus"});
  CHECK(bad.code == 4);
  CHECK(bad.out.find("FAIL product_form_vs_enumeration") != std::string::npos);
}

TEST_CASE("sweeps are independent of the thread count") {
  const std::vector<std::string> args{"entropy", "--n", "10", "--g-list", "0.01,0.05,0.1,0.2,0.5,1"};
  setenv("ANNEAL_THREADS", "1", 1);
  const Run one = anneal(args);
  setenv("ANNEAL_THREADS", "3", 1);
  const Run three = anneal(args);
  unsetenv("ANNEAL_THREADS");
  REQUIRE(one.code == 0);
  CHECK(one.out == three.out);
}

TEST_CASE("level files drive the model") {
  const fs::path dir = scratch("levels");
  std::ofstream(dir / "ok.txt") << "0.1\n0.2\n0.35\n0.5\n";
  std::ofstream(dir / "bad.txt") << "0.1\n0.3\n0.2\n0.5\n";
  CHECK(anneal({"spectrum", "--n", "4", "--g", "0.2", "--points", "20", "--levels-file", (dir / "ok.txt").string()}).code == 0);
  CHECK(anneal({"spectrum", "--n", "4", "--g", "0.2", "--points", "20", "--levels-file", (dir / "bad.txt").string()}).code == 2);
  CHECK(anneal({"spectrum", "--n", "6", "--g", "0.2", "--levels-file", (dir / "ok.txt").string()}).code == 2);
}

TEST_CASE("cheap figure reproductions") {
  const Run fig4b = anneal({"figure", "--id", "4b", "--n", "200", "--g-list", "0.01,0.02"});
  REQUIRE(fig4b.code == 0);
  CHECK(lines(fig4b.out).size() == 3);
  CHECK(lines(fig4b.out)[0].find("eta_approx") != std::string::npos);
  CHECK(anneal({"figure", "--id", "5a", "--g-list", "0.1,0.2"}).code == 0);
  CHECK(anneal({"figure", "--id", "6", "--n", "100"}).code == 0);
}

TEST_CASE("version flag") {
  const Run r = anneal({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find(qanneal::kVersion) != std::string::npos);
}
