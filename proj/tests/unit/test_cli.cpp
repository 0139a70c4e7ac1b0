#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "steinfit/cli.hpp"
#include "steinfit/json_io.hpp"

using namespace steinfit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "steinfit_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string burr_data_file() {
  RngStream rng(42, fnv1a64("data"));
  const Sample s = sample(dist::burr(1, 1), 100, rng);
  std::string text;
  for (double x : s) text += dump_json(Json(x)) + "\n";
  return write("burr11.txt", text);
}

} // namespace

TEST_CASE("read_sample") {
  std::istringstream plain("1.5\n\n# comment\n 2 \n+3e-1\n");
  const auto s = read_sample(plain);
  REQUIRE(s.size() == 3);
  CHECK(s[2] == 0.3);

  std::istringstream bad("1\n2\nabc\n");
  try {
    read_sample(bad);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  std::istringstream csv("id,x\n1,0.5\n2,0.75\n");
  const auto c = read_sample(csv, std::string("x"));
  REQUIRE(c.size() == 2);
  CHECK(c[1] == 0.75);
  std::istringstream nan("1\nnan\n");
  CHECK_THROWS_AS(read_sample(nan), std::invalid_argument);
}

TEST_CASE("test subcommand input errors exit 2") {
  const auto bad = write("bad.txt", "1\n2\nabc\n");
  auto r = cli({"test", "--data", bad, "--stat", "B", "--a", "3"});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("line 3") != std::string::npos);

  r = cli({"test", "--data", write("one.txt", "1.0\n"), "--stat", "KS"});
  CHECK(r.code == kExitInput);

  r = cli({"test", "--data", write("neg.txt", "1\n-2\n3\n"), "--stat", "KS"});
  CHECK(r.code == kExitInput);

  r = cli({"test", "--data", (scratch() / "missing.txt").string()});
  CHECK(r.code == kExitInput);

  r = cli({"test", "--data", bad, "--stat", "B"});  // B without --a
  CHECK(r.code == kExitInput);

  r = cli({"test", "--data", bad, "--stat", "chi2"});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("KS") != std::string::npos);

  CHECK(cli({"frobnicate"}).code == kExitInput);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("test subcommand on Burr(1,1) data") {
  const auto data = burr_data_file();
  const std::vector<std::string> base = {"test", "--data", data, "--family", "burr", "--stat", "B", "--a", "3",
                                         "--B", "100", "--alpha", "0.1", "--seed", "42"};
  auto args1 = base;
  args1.insert(args1.end(), {"--threads", "1"});
  auto args8 = base;
  args8.insert(args8.end(), {"--threads", "8"});
  const auto r1 = cli(args1), r8 = cli(args8);
  REQUIRE(r1.code == kExitOk);
  CHECK(r1.out == r8.out);

  const auto j = Json::parse(r1.out);
  CHECK(j["reject"] == false);
  CHECK(j["statistic"] == "B_3");
  const auto t = outcome_from_json(j);
  CHECK(dump_json(to_json(t)) + "\n" == r1.out);

  auto with_file = base;
  const auto json_path = (scratch() / "outcome.json").string();
  with_file.insert(with_file.end(), {"--json", json_path});
  const auto rf = cli(with_file);
  CHECK(rf.code == kExitOk);
  std::ifstream in(json_path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == r1.out);
}

TEST_CASE("simulate subcommand") {
  const auto bad = write("bad_cfg.json", R"J({"n": 20, "alpha": 0.1, "mc_reps": 0, "bootstrap_B": 10, "seed": 1,
      "statistics": ["nope"], "alternatives": ["W(0.5)"]})J");
  auto r = cli({"simulate", "--config", bad, "--out", (scratch() / "sim_bad").string()});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("mc_reps") != std::string::npos);
  CHECK(r.err.find("nope") != std::string::npos);

  const auto cfg = write("cfg.json", R"J({"n": 20, "alpha": 0.1, "mc_reps": 4, "bootstrap_B": 10, "seed": 5,
      "statistics": ["B_1", "KS"], "alternatives": ["W(0.5)", "Burr_XII(1,1)"]})J");
  const auto d1 = scratch() / "sim1", d8 = scratch() / "sim8";
  const auto r1 = cli({"simulate", "--config", cfg, "--out", d1.string(), "--threads", "1"});
  const auto r8 = cli({"simulate", "--config", cfg, "--out", d8.string(), "--threads", "8"});
  REQUIRE(r1.code == kExitOk);
  CHECK(r1.out == r8.out);
  CHECK(r1.out.find("| Alt./Test | B_1 | KS |") != std::string::npos);
  for (const char* f : {"power.csv", "power.md", "report.json"}) {
    CHECK(fs::exists(d1 / f));
  }
  auto load = [](const fs::path& p) {
    auto j = Json::parse(std::ifstream(p));
    j.erase("wall_time_seconds");
    return dump_json(j);
  };
  CHECK(load(d1 / "report.json") == load(d8 / "report.json"));
}

TEST_CASE("verify subcommand") {
  auto r = cli({"verify", "--family", "burr", "--params", "k=1,c=1"});
  REQUIRE(r.code == kExitOk);
  auto j = Json::parse(r.out);
  CHECK(j["conditions"]["passes"] == true);
  CHECK(j["fixed_point_residual"]["value"].get<double>() <= 1e-6);

  r = cli({"verify", "--family", "shifted_gamma", "--params", "k=0.5,lambda=1,mu=1"});
  REQUIRE(r.code == kExitOk);
  CHECK(Json::parse(r.out)["conditions"]["verdicts"]["C3"] == "fail");

  r = cli({"verify", "--family", "beta", "--params", "alpha=0.5,beta=0.5"});
  REQUIRE(r.code == kExitOk);
  CHECK(Json::parse(r.out)["conditions"]["supported"] == false);

  CHECK(cli({"verify", "--family", "cauchy"}).code == kExitInput);
  CHECK(cli({"verify", "--family", "burr", "--params", "k=1"}).code == kExitInput);
  CHECK(cli({"verify", "--family", "burr", "--params", "k=1,c=x"}).code == kExitInput);
}
