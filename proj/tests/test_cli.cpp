#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sandlab/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "sandlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return sandlab::cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sandlab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

json without_timestamps(const fs::path& p) {
  json j = json::parse(slurp(p));
  j.erase("timestamps");
  return j;
}

}  // namespace

TEST_CASE("enumerate reports the recurrent count") {
  const auto out = scratch("enum.json");
  CHECK(run({"enumerate", "--dim", "2", "--L", "1", "--n", "1", "--m", "1", "-o", out.string()}) == 0);
  const json j = json::parse(slurp(out));
  CHECK(j["allowed_count"] == 614656);
  CHECK(j["schema"] == 1);
  CHECK(j.contains("version"));
  CHECK(j.contains("seed"));
  CHECK(j["timestamps"].contains("started"));
  CHECK(j["params"]["threshold"] == 5);
}

TEST_CASE("scaling reports nu_a") {
  const auto out = scratch("scaling.json");
  CHECK(run({"scaling", "--dim", "2", "--a-grid", "1e-1:1e-5:log", "-o", out.string()}) == 0);
  const json j = json::parse(slurp(out));
  CHECK(std::abs(j["nu_a"].get<double>() - 0.5) <= 0.01);
  CHECK(j["points"].size() == 21);
}

TEST_CASE("green writes a symmetric CSV") {
  const auto out = scratch("green.csv");
  CHECK(run({"green", "--dim", "2", "--a", "0.5", "--n", "1", "--radius", "5", "-o", out.string()}) == 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  CHECK(line == "x1,x2,value,est_abs_error,method");
  std::map<std::pair<int, int>, std::string> values;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string x1, x2, v;
    std::getline(ls, x1, ',');
    std::getline(ls, x2, ',');
    std::getline(ls, v, ',');
    values[{std::stoi(x1), std::stoi(x2)}] = v;
  }
  CHECK(rows == 121);
  for (const auto& [k, v] : values) {
    CHECK(values.at({-k.first, k.second}) == v);
    CHECK(values.at({k.first, -k.second}) == v);
    CHECK(values.at({k.second, k.first}) == v);
  }
  CHECK(values.at({0, 0}).substr(0, 12) == "0.1920116848");
}

TEST_CASE("simulate output is reproducible apart from timestamps") {
  const auto a = scratch("sim_a.json"), b = scratch("sim_b.json"), ts = scratch("sim_ts.csv");
  const std::vector<std::string> base{"simulate", "--dim", "2", "--L", "3", "--n", "1", "--m", "2",
                                      "--samples", "4000", "--seed", "77", "--replicas", "2"};
  auto args = base;
  args.insert(args.end(), {"-o", a.string(), "--timeseries", ts.string()});
  CHECK(run(args) == 0);
  args = base;
  args.insert(args.end(), {"-o", b.string()});
  CHECK(run(args) == 0);
  CHECK(without_timestamps(a) == without_timestamps(b));
  const json j = json::parse(slurp(a));
  CHECK(j["seed"] == 77);
  CHECK(j["samples"] == 8000);
  CHECK(j["counters"]["adjacent_subn_pairs"] == 0);
  CHECK(slurp(ts).rfind("replica,sample,total_topplings", 0) == 0);
}

TEST_CASE("heights writes CSV and a JSON summary") {
  const auto out = scratch("heights.csv");
  CHECK(run({"heights", "--dim", "2", "--a", "0.1", "--k-max", "6", "-o", out.string()}) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("k,r,P00,C00,reliable_flag\n", 0) == 0);
  const json j = json::parse(slurp(out.string() + ".json"));
  CHECK(std::abs(j["P0_det"].get<double>() - j["P0_closed"].get<double>()) <= 1e-8);
  for (const char* key : {"c2", "xi", "lambda"}) CHECK(j.contains(key));
}

TEST_CASE("exact reports finite-torus quantities") {
  const auto out = scratch("exact.json");
  CHECK(run({"exact", "--dim", "2", "--L", "3", "--n", "1", "--m", "2", "-o", out.string()}) == 0);
  const json j = json::parse(slurp(out));
  CHECK(std::abs(j["G_row_sum"].get<double>() - 0.5) <= 1e-12);
  CHECK(std::abs(j["P0_det"].get<double>() - j["P0_full_size"].get<double>()) <= 1e-9);
}

TEST_CASE("config files fill unset flags and flags take precedence") {
  const auto cfg = scratch("scaling.ini");
  std::ofstream(cfg) << "# sweep\ndim = 3\na-grid = 1e-2:1e-4:log:3\n";
  const auto out = scratch("scaling_cfg.json");
  CHECK(run({"scaling", "--config", cfg.string(), "-o", out.string()}) == 0);
  json j = json::parse(slurp(out));
  CHECK(j["params"]["d"] == 3);
  CHECK(j["params"]["a_grid"] == "1e-2:1e-4:log:3");
  CHECK(run({"scaling", "--config", cfg.string(), "--dim", "2", "-o", out.string()}) == 0);
  j = json::parse(slurp(out));
  CHECK(j["params"]["d"] == 2);
  const auto bad = scratch("bad.ini");
  std::ofstream(bad) << "no-such-key = 1\n";
  CHECK(run({"scaling", "--config", bad.string(), "-o", out.string()}) == 1);
}

TEST_CASE("exit codes") {
  const auto out = scratch("err.json");
  CHECK(run({"enumerate", "--bogus"}) == 1);
  CHECK(run({}) == 1);
  CHECK(run({"enumerate", "--dim", "1", "-o", out.string()}) == 1);
  CHECK(run({"enumerate", "--L", "2", "-o", out.string()}) == 1);
  CHECK(run({"green", "--a", "-1", "-o", out.string()}) == 1);
  CHECK(run({"scaling", "--a-grid", "0.1,0.05", "-o", out.string()}) == 1);
  CHECK(run({"scaling", "--from-c00", "--a-grid", "0.5,0.4,0.3,0.2", "--r-lo", "40", "--k-max", "60", "-o",
             out.string()}) == 2);
  CHECK(run({"--help"}) == 0);
}
