#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bv/bv.hpp"
#include "cli.hpp"

using namespace bv;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string default_config() { return std::string(BV_SOURCE_DIR) + "/configs/default.json"; }

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("bv_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli({}).code == cli::kUsage);
  const auto r = run_cli({"shoot", "--u0", "1", "--v0", "1", "--bogus"});
  CHECK(r.code == cli::kUsage);
  CHECK_THAT(r.err, ContainsSubstring("Usage"));
  CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(run_cli({"shoot", "--u0", "1"}).code == cli::kUsage);
  CHECK(run_cli({"--help"}).code == cli::kSuccess);
}

TEST_CASE("shoot writes a CSV matching the bubble") {
  const auto r = run_cli({"shoot", "--u0", "1", "--v0", "1", "--config", default_config()});
  REQUIRE(r.code == cli::kSuccess);
  std::istringstream in(r.out);
  const auto table = read_csv(in);
  CHECK(table.header == std::vector<std::string>{"r", "u", "v", "du", "dv"});
  // u(0) = 1 is the bubble with t = c².
  const auto phi = make_bubble(3, {}, std::pow(bubble_constant(3), 2.0));
  const auto& rr = table.column("r");
  const auto& u = table.column("u");
  REQUIRE(rr.size() == 4000);
  for (std::size_t i = 0; i < rr.size() && rr[i] <= 50.0; ++i) {
    REQUIRE_THAT(u[i], WithinRel(eval_bubble_radial(phi, rr[i]), 1e-6));
  }
  CHECK_THAT(r.err, ContainsSubstring("BoundState"));
}

TEST_CASE("outputs carry a manifest and reproduce byte for byte") {
  const auto out = (scratch_dir() / "profile.csv").string();
  const std::vector<std::string> args{"shoot", "--u0", "1", "--v0", "2", "--out", out, "--seed", "5"};
  REQUIRE(run_cli(args).code == cli::kSuccess);
  const auto first = slurp(out);
  REQUIRE(fs::exists(manifest_path(out)));
  const auto manifest = nlohmann::json::parse(slurp(manifest_path(out)));
  CHECK(manifest["subcommand"] == "shoot");
  CHECK(manifest["seed"] == 5);
  CHECK(manifest["parameters"]["--u0"] == "1");
  CHECK(manifest["outputs"][0] == out);
  CHECK(manifest["version"] == kVersion);
  REQUIRE(run_cli(args).code == cli::kSuccess);
  CHECK(slurp(out) == first);
}

TEST_CASE("bubble subcommands") {
  const auto e = run_cli({"bubble", "eval", "--x", "0,1,0"});
  REQUIRE(e.code == cli::kSuccess);
  CHECK_THAT(nlohmann::json::parse(e.out)["phi"].get<double>(), WithinRel(std::pow(3.0, 0.25) * std::sqrt(0.5), 1e-15));
  CHECK(run_cli({"bubble", "eval", "--x", "0,1"}).code == cli::kUsage);

  const auto r = run_cli({"bubble", "residual", "--t", "2"});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(nlohmann::json::parse(r.out)["residual"].get<double>() <= 1e-6);

  const auto p = run_cli({"bubble", "profile"});
  REQUIRE(p.code == cli::kSuccess);
  CHECK(p.out.rfind("r,phi\n", 0) == 0);

  CHECK(run_cli({"bubble", "eval", "--x", "0,0,0", "--t", "0"}).code == cli::kNumericalFailure);
}

TEST_CASE("sweep reports kinds and honours the hypothesis") {
  const auto r = run_cli({"sweep", "--ratios", "0.5,1,2"});
  REQUIRE(r.code == cli::kSuccess);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "ratio,kind,R0,diagnostics");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK_THAT(rows[0], ContainsSubstring("PositivityFailure"));
  CHECK_THAT(rows[1], ContainsSubstring("BoundState"));

  const auto cfg = (scratch_dir() / "equal.json").string();
  std::ofstream(cfg) << R"({"n": 3, "alpha": 2.5, "beta": 2.5})";
  CHECK(run_cli({"sweep", "--config", cfg}).code == cli::kNumericalFailure);
}

TEST_CASE("bad configs") {
  const auto off = (scratch_dir() / "off.json").string();
  std::ofstream(off) << R"({"n": 3, "alpha": 2, "beta": 2})";
  CHECK(run_cli({"bubble", "profile", "--config", off}).code == cli::kNumericalFailure);
  const auto junk = (scratch_dir() / "junk.json").string();
  std::ofstream(junk) << "{not json";
  CHECK(run_cli({"bubble", "profile", "--config", junk}).code == cli::kUsage);
  CHECK(run_cli({"bubble", "profile", "--config", "/nonexistent.json"}).code == cli::kUsage);
}

TEST_CASE("identity exits 2 when the gap exceeds the bound") {
  const auto ok = run_cli({"identity"});
  REQUIRE(ok.code == cli::kSuccess);
  CHECK(nlohmann::json::parse(ok.out)["max_abs_gap"].get<double>() <= 1e-5);
  CHECK(run_cli({"identity", "--max-gap", "1e-12"}).code == cli::kAssertionFailed);
  CHECK(run_cli({"identity", "--u0", "1", "--v0", "2", "--radii", "0.5,1"}).code == cli::kSuccess);
}

TEST_CASE("potential, picard and hls") {
  const auto p = run_cli({"potential", "apply", "--source", "ball"});
  REQUIRE(p.code == cli::kSuccess);
  std::istringstream in(p.out);
  const auto table = read_csv(in);
  CHECK_THAT(table.column("value").front(), WithinAbs(0.5, 1e-6));

  const auto write_source = [](const fs::path& path, double h, int count) {
    std::ofstream f(path);
    f << "r,value\n";
    for (int i = 1; i <= count; ++i) f << h * i << ',' << (2 * i <= count ? 1.0 : 0.0) << '\n';
    return path.string();
  };
  CHECK(run_cli({"potential", "apply", "--in", write_source(scratch_dir() / "source.csv", 1e-4, 20000)}).code ==
        cli::kSuccess);
  // first node above 1e-4
  CHECK(run_cli({"potential", "apply", "--in", write_source(scratch_dir() / "coarse.csv", 1e-3, 2000)}).code ==
        cli::kNumericalFailure);

  const auto pic = run_cli({"picard", "--max-steps", "3"});
  REQUIRE(pic.code == cli::kSuccess);
  std::istringstream lines(pic.out);
  std::string first;
  std::getline(lines, first);
  const auto j = nlohmann::json::parse(first);
  CHECK(j["step"] == 1);
  CHECK(j["residual"].get<double>() <= 1e-4);

  const auto h = run_cli({"hls", "--t", "2", "--operator"});
  REQUIRE(h.code == cli::kSuccess);
  const auto hj = nlohmann::json::parse(h.out);
  CHECK_THAT(hj["ratio"].get<double>(), WithinRel(2.2940184, 1e-6));
  CHECK(hj["r_exp"].get<double>() == Catch::Approx(1.2));
  CHECK(run_cli({"hls", "--rexp", "1.2", "--sexp", "1.3"}).code == cli::kNumericalFailure);
}

TEST_CASE("moving-plane subcommands") {
  const auto s = run_cli({"mp", "scan", "--center", "1", "--lo", "-5", "--hi", "5", "--count", "65"});
  REQUIRE(s.code == cli::kSuccess);
  const auto sj = nlohmann::json::parse(s.out);
  CHECK(std::abs(sj["lambda0"].get<double>() - 1.0) <= sj["cell"].get<double>());

  const auto nodes = (scratch_dir() / "nodes.csv").string();
  const auto out = (scratch_dir() / "check.json").string();
  const auto c = run_cli({"mp", "check", "--center", "1", "--lambda", "0", "--nodes-csv", nodes, "--out", out});
  REQUIRE(c.code == cli::kSuccess);
  const auto cj = nlohmann::json::parse(slurp(out));
  CHECK(cj["Bu_count"].get<int>() > 0);
  CHECK(cj["norms"].contains("u_lambda-u@Bu"));
  std::ifstream nf(nodes);
  CHECK(read_csv(nf).column("x1").size() == cj["Bu_count"].get<std::size_t>());
  const auto manifest = nlohmann::json::parse(slurp(manifest_path(out)));
  CHECK(manifest["subcommand"] == "mp check");
  CHECK(manifest["outputs"].size() == 2);

  const auto id = run_cli({"mp", "identity", "--center", "1", "--lambda", "0", "--x", "-1,0,0"});
  REQUIRE(id.code == cli::kSuccess);
  const auto ij = nlohmann::json::parse(id.out);
  CHECK_THAT(ij["rhs"].get<double>(), WithinRel(ij["lhs"].get<double>(), 0.02));
  CHECK(run_cli({"mp", "identity", "--lambda", "0", "--x", "1,0,0"}).code == cli::kUsage);
}

TEST_CASE("verify-all passes on the default config") {
  const auto r = run_cli({"verify-all", "--config", default_config()});
  CHECK(r.code == cli::kSuccess);
  int passes = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) passes += line.rfind("PASS", 0) == 0;
  CHECK(passes == 12);
}

TEST_CASE("thread count falls back to BV_THREADS") {
  ::setenv("BV_THREADS", "3", 1);
  CHECK(resolve_threads(0) == 3);
  CHECK(resolve_threads(2) == 2);
  ::setenv("BV_THREADS", "junk", 1);
  CHECK(resolve_threads(0) >= 1);
  ::unsetenv("BV_THREADS");
}
