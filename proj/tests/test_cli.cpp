#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "annealroot/basin.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;
using annealroot::cli::main_entry;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("annealroot_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("manifest lists the fourteen functions") {
  const auto r = run({"manifest"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["functions"].size() == 14);
  CHECK(j["functions"][1]["id"] == "f2");
  CHECK(j["functions"][1]["formula"] == "x^3 - 1");
  CHECK(j["functions"][1]["known_roots"].size() == 3);
}

TEST_CASE("cuberoot prints the window and a contraction table") {
  const auto r = run({"cuberoot"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("window: (0.26457, 0.79370)") != std::string::npos);
  CHECK(r.out.find("beta_min: 0.52913") != std::string::npos);
  CHECK(r.out.find("root in one step") != std::string::npos);
  const auto j = run({"cuberoot", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  for (const auto& row : doc["contraction"]) {
    CHECK(std::abs(row["predicted"].get<double>() - row["measured"].get<double>()) < 1e-10);
  }
}

TEST_CASE("error categories map to distinct exit codes") {
  const auto unknown = run({"fractal", "--function", "f99", "--beta", "0", "--grid", "8x8"});
  CHECK(unknown.code == annealroot::cli::kUnknownFunction);
  CHECK(unknown.err.find("f99") != std::string::npos);
  CHECK(std::count(unknown.err.begin(), unknown.err.end(), '\n') == 1);

  const fs::path bad = scratch_dir() / "bad.json";
  write_file(bad, "{\"n\": 2, \"gamma\": [0, 1, 1");
  const auto malformed = run({"kuramoto", "--input", bad.string()});
  CHECK(malformed.code == annealroot::cli::kMalformedInput);

  write_file(bad, R"({"n": 2, "gamma": [1, 1, 1, 0], "psi": [0, 0, 0, 0], "kappa": 1})");
  CHECK(run({"kuramoto", "--input", bad.string()}).code == annealroot::cli::kMalformedInput);

  const auto covering = run({"entropy", "--function", "f2", "--beta", "0", "--grid", "30x30"});
  CHECK(covering.code == annealroot::cli::kIncompatibleCovering);

  CHECK(unknown.code != malformed.code);
  CHECK(malformed.code != covering.code);
  CHECK(unknown.code != covering.code);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == annealroot::cli::kUsage);
  CHECK(run({"bogus"}).code == annealroot::cli::kUsage);
  CHECK(run({"fractal", "--function", "f2", "--grid", "8x8"}).code == annealroot::cli::kUsage);
  CHECK(run({"fractal", "--function", "f2", "--schedule", "anneal", "--beta", "1"}).code ==
        annealroot::cli::kUsage);
  CHECK(run({"order", "--seed", "3", "--grid", "8x8"}).code == annealroot::cli::kUsage);
  CHECK(run({"table1", "--grid", "8by8"}).code == annealroot::cli::kUsage);
  CHECK(run({"manifest", "--format", "csv"}).code == annealroot::cli::kUsage);
  CHECK(run({"fractal", "--function", "f2", "--beta", "0", "--format", "xml"}).code ==
        annealroot::cli::kUsage);
  CHECK(run({"table1", "--grid", "8x8", "--max-iter", "0"}).code == annealroot::cli::kInvalidArgument);
}

TEST_CASE("help documents exit codes") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Exit codes") != std::string::npos);
  CHECK(r.out.find("ANNEALROOT_JOBS") != std::string::npos);
}

TEST_CASE("failed runs leave no output file") {
  const fs::path out = scratch_dir() / "never.ppm";
  fs::remove(out);
  const auto r = run({"fractal", "--function", "nope", "--beta", "0", "--out", out.string()});
  CHECK(r.code != 0);
  CHECK_FALSE(fs::exists(out));
  const fs::path ent = scratch_dir() / "never.csv";
  run({"entropy", "--function", "f2", "--beta", "0", "--grid", "30x30", "--out", ent.string()});
  CHECK_FALSE(fs::exists(ent));
  CHECK_FALSE(fs::exists(ent.string() + ".partial"));
  // Unwritable destination.
  const auto io = run({"manifest", "--out", (scratch_dir() / "missing" / "m.json").string()});
  CHECK(io.code == annealroot::cli::kIo);
}

TEST_CASE("fractal writes a deterministic PPM") {
  const fs::path a = scratch_dir() / "a.ppm";
  const fs::path b = scratch_dir() / "b.ppm";
  REQUIRE(run({"fractal", "--function", "f2", "--beta", "0", "--grid", "60x40", "--out", a.string(), "--jobs", "1"}).code == 0);
  REQUIRE(run({"fractal", "--function", "f2", "--beta", "0", "--grid", "60x40", "--out", b.string(), "--jobs", "3"}).code == 0);
  const std::string bytes = slurp(a);
  CHECK(bytes.rfind("P6\n60 40\n255\n", 0) == 0);
  CHECK(bytes.size() == std::string("P6\n60 40\n255\n").size() + 60 * 40 * 3);
  CHECK(bytes == slurp(b));
  const auto json = run({"fractal", "--function", "f2", "--schedule", "anneal", "--grid", "10x10", "--format", "json"});
  REQUIRE(json.code == 0);
  CHECK(nlohmann::json::parse(json.out)["labels"].size() == 100);
}

TEST_CASE("order emits the documented CSV columns") {
  const auto r = run({"order", "--function", "f2", "--grid", "40x40"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "function,beta_mode,beta,q_final,valid");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("f2,", 0) == 0);
    CHECK(line.size() > 5);
    CHECK(line.substr(line.size() - 4) == "true");
  }
  CHECK(rows == 3);
  const auto single = run({"order", "--function", "f5", "--beta", "1", "--grid", "40x40"});
  CHECK(single.out.find("f5,fixed,1,") != std::string::npos);
}

TEST_CASE("table subcommands") {
  const auto csv = run({"table1", "--function", "f4", "--grid", "20x20"});
  REQUIRE(csv.code == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 6);
  const auto md = run({"table2", "--function", "f2", "--grid", "20x20", "--format", "md"});
  REQUIRE(md.code == 0);
  CHECK(md.out.find("Order anneal") != std::string::npos);
  const auto json = run({"table2", "--function", "f2", "--grid", "20x20", "--format", "json"});
  REQUIRE(json.code == 0);
  CHECK(nlohmann::json::parse(json.out)[0]["function"] == "f2");
}

TEST_CASE("entropy subcommand") {
  const auto one = run({"entropy", "--function", "f2", "--beta", "0", "--grid", "40x40"});
  REQUIRE(one.code == 0);
  CHECK(one.out.rfind("function,beta,entropy\nf2,0,", 0) == 0);
  const auto curve = run({"entropy", "--function", "f2", "--beta-sweep", "-1:1:0.5", "--grid", "40x40", "--format", "json"});
  REQUIRE(curve.code == 0);
  CHECK(nlohmann::json::parse(curve.out)["points"].size() == 5);
  CHECK(run({"entropy", "--function", "f2", "--beta-sweep", "1:2", "--grid", "40x40"}).code ==
        annealroot::cli::kUsage);
}

TEST_CASE("kuramoto subcommand") {
  const fs::path sys = scratch_dir() / "two.json";
  write_file(sys, R"({"n": 2, "gamma": [0, 1, 1, 0], "psi": [0, 0.4, 0.4, 0], "kappa": 2})");
  const auto r = run({"kuramoto", "--input", sys.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "converged");
  CHECK(std::abs(j["phases"][1].get<double>()) < 1e-12);
  CHECK(j["omega"].get<double>() == doctest::Approx(2.0 * std::sin(0.4)));

  const auto a = run({"kuramoto", "--random", "5", "--seed", "9"});
  const auto b = run({"kuramoto", "--random", "5", "--seed", "9"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != run({"kuramoto", "--random", "5", "--seed", "10"}).out);
  CHECK(run({"kuramoto", "--input", sys.string(), "--seed", "1"}).code == annealroot::cli::kUsage);
  CHECK(run({"kuramoto"}).code == annealroot::cli::kUsage);
}

TEST_CASE("config file fills unset flags") {
  const fs::path cfg = scratch_dir() / "cfg.json";
  write_file(cfg, R"({"function": "f2", "grid": "20x20", "beta": 0})");
  const auto from_file = run({"entropy", "--config", cfg.string()});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out.find("f2,0,") != std::string::npos);
  // Flags win over the file: 30x30 is incompatible with 20x20 boxes.
  CHECK(run({"entropy", "--config", cfg.string(), "--grid", "30x30"}).code ==
        annealroot::cli::kIncompatibleCovering);
  write_file(cfg, R"({"colour": "blue"})");
  CHECK(run({"manifest", "--config", cfg.string()}).code == annealroot::cli::kMalformedInput);
  write_file(cfg, "not json");
  CHECK(run({"manifest", "--config", cfg.string()}).code == annealroot::cli::kMalformedInput);
}

TEST_CASE("worker count honours the environment") {
  ::setenv("ANNEALROOT_JOBS", "3", 1);
  CHECK(annealroot::default_jobs() == 3);
  ::unsetenv("ANNEALROOT_JOBS");
  CHECK(annealroot::default_jobs() >= 1);
}

TEST_CASE("installed binary runs") {
  const std::string cmd = std::string(ANNEALROOT_CLI_PATH) + " manifest > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(ANNEALROOT_CLI_PATH) + " fractal --function f0 --beta 0 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == annealroot::cli::kUnknownFunction);
}
