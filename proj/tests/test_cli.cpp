// End-to-end runs of the command-line binary: output formats, overrides,
// reproducibility, and failure modes.  The binary path comes in through a
// compile definition.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("lbkld_cli_test_" + name);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  RunResult res;
  std::string cmd = std::string(LBKLD_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
    res.output.append(buf, got);
  }
  int status = pclose(pipe);
  res.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

// Data only: stderr log lines are dropped so reruns compare byte-equal.
std::string data_only(const std::string& args) {
  std::string cmd = std::string(LBKLD_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

const char* kUtilityConfig = R"({
  "model": {"name": "toy"},
  "estimator": {"kind": "lbkld_partition", "n": 300, "L": 2, "n_min": 10,
                "replications": 3},
  "design": {"kind": "point", "coords": [5]},
  "seed": 12
})";

}  // namespace

TEST_CASE("utility emits the documented JSON object deterministically") {
  fs::path cfg = temp_file("utility.json");
  write_file(cfg, kUtilityConfig);

  std::string first = data_only("utility --config " + cfg.string());
  std::string second = data_only("utility --config " + cfg.string());
  CHECK(first == second);
  CHECK(!first.empty());
  CHECK(first.find('\r') == std::string::npos);

  nlohmann::json j = nlohmann::json::parse(first);
  CHECK(j.at("design") == nlohmann::json::array({5.0}));
  CHECK(j.at("kind") == "lbkld_partition");
  CHECK(j.at("n_sims") == 3 * 300 * 3);
  CHECK(j.at("replications") == 3);
  CHECK(j.at("seed") == 12);
  CHECK(j.at("value").is_number());
  CHECK(j.at("std_error").is_number());
  CHECK(!j.contains("degenerate"));
}

TEST_CASE("seed and worker overrides") {
  fs::path cfg = temp_file("override.json");
  write_file(cfg, kUtilityConfig);
  std::string base = data_only("utility --config " + cfg.string());

  // Same seed spelled explicitly: identical bytes.  New seed: new value.
  CHECK(data_only("utility --seed 12 --config " + cfg.string()) == base);
  std::string reseeded = data_only("utility --seed 13 --config " + cfg.string());
  CHECK(reseeded != base);
  CHECK(nlohmann::json::parse(reseeded).at("seed") == 13);

  // Worker count must never change numbers.
  CHECK(data_only("utility --workers 4 --config " + cfg.string()) == base);
  std::string env_run;
  {
    std::string cmd = std::string("LBKLD_WORKERS=3 ") + LBKLD_CLI_PATH +
                      " utility --config " + cfg.string() + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) env_run.append(buf, got);
    pclose(pipe);
  }
  CHECK(env_run == base);
}

TEST_CASE("sweep writes one row per design plus the argmax comment") {
  fs::path cfg = temp_file("sweep.json");
  write_file(cfg, R"({
    "model": {"name": "toy"},
    "estimator": {"kind": "lbkld_partition", "n": 200, "L": 2, "n_min": 10,
                  "replications": 2},
    "design": {"kind": "scalar_interval", "lo": 2, "hi": 100,
               "grid_points": 6},
    "seed": 4
  })");
  std::string csv = data_only("sweep --config " + cfg.string());
  std::vector<std::string> ls = lines(csv);
  REQUIRE(ls.size() == 8);  // header + 6 rows + argmax comment
  CHECK(ls[0] == "design_1,estimator,value,std_error,n_sims,seed");
  CHECK(ls[7].rfind("# argmax: design=(", 0) == 0);

  // The comment names the same design as the best value column.
  double best = -1e308;
  std::string best_design;
  for (std::size_t i = 1; i <= 6; ++i) {
    std::istringstream row(ls[i]);
    std::string design, kind, value;
    std::getline(row, design, ',');
    std::getline(row, kind, ',');
    std::getline(row, value, ',');
    double v = std::strtod(value.c_str(), nullptr);
    if (v > best) {
      best = v;
      best_design = design;
    }
  }
  CHECK(ls[7].find("design=(" + best_design + ")") != std::string::npos);

  // Reruns are byte-identical; the --out file matches stdout bytes.
  fs::path out = temp_file("sweep.csv");
  run_cli("sweep --config " + cfg.string() + " --out " + out.string());
  CHECK(read_file(out) == csv);
}

TEST_CASE("optimize writes a final JSON and a sidecar iterate trace") {
  fs::path cfg = temp_file("optimize.json");
  write_file(cfg, R"({
    "model": {"name": "toy"},
    "estimator": {"kind": "lbkld_partition", "n": 200, "L": 1, "n_min": 4,
                  "replications": 2},
    "design": {"kind": "time_box", "k": 1, "lo": 2, "hi": 100,
               "grid_resolution": 0.5},
    "seed": 8,
    "spsa": {"iterations": 5, "replications_per_eval": 2}
  })");
  fs::path out = temp_file("optimize.json.out");
  RunResult res = run_cli("optimize --config " + cfg.string() + " --out " +
                          out.string());
  REQUIRE(res.status == 0);

  nlohmann::json j = nlohmann::json::parse(read_file(out));
  REQUIRE(j.at("design").size() == 1);
  double d = j.at("design")[0].get<double>();
  CHECK(d >= 2.0);
  CHECK(d <= 100.0);
  CHECK(j.at("iterations") == 5);
  CHECK(!j.contains("aborted"));

  fs::path trace = out;
  trace += ".trace.csv";
  std::string trace_text = read_file(trace);
  std::vector<std::string> ls = lines(trace_text);
  REQUIRE(ls.size() == 6);  // header + one row per iteration
  CHECK(ls[0] == "iteration,design_1,utility");

  // Rerun reproduces both artifacts byte for byte.
  run_cli("optimize --config " + cfg.string() + " --out " + out.string());
  CHECK(read_file(trace) == trace_text);
}

TEST_CASE("replicate-infer emits trials and the error summary") {
  fs::path cfg = temp_file("infer.json");
  write_file(cfg, R"({
    "model": {"name": "toy"},
    "estimator": {"kind": "d_posterior_precision", "n_sim": 400,
                  "n_keep": 20, "n_outer": 6},
    "design": {"kind": "point", "coords": [10]},
    "seed": 2
  })");
  std::string csv = data_only("replicate-infer --config " + cfg.string());
  std::vector<std::string> ls = lines(csv);
  REQUIRE(ls.size() == 8);  // header + 6 trials + mse comment
  CHECK(ls[0] == "trial,theta_true_1,post_mean_1");
  CHECK(ls[7].rfind("# mse: ", 0) == 0);
}

TEST_CASE("failures exit nonzero with a named cause") {
  RunResult missing = run_cli("utility --config /nonexistent/path.json");
  CHECK(missing.status != 0);

  fs::path bad = temp_file("bad.json");
  write_file(bad, R"({
    "model": {"name": "toy", "oops": 1},
    "estimator": {"kind": "lbkld_partition"},
    "design": {"kind": "point", "coords": [5]}
  })");
  RunResult unknown = run_cli("utility --config " + bad.string());
  CHECK(unknown.status != 0);
  CHECK(unknown.output.find("model.oops") != std::string::npos);

  // utility needs a point design.
  fs::path sweep_cfg = temp_file("wrong_design.json");
  write_file(sweep_cfg, R"({
    "model": {"name": "toy"},
    "estimator": {"kind": "lbkld_partition"},
    "design": {"kind": "scalar_interval", "lo": 2, "hi": 100,
               "grid_points": 4}
  })");
  RunResult wrong = run_cli("utility --config " + sweep_cfg.string());
  CHECK(wrong.status != 0);
  CHECK(wrong.output.find("point") != std::string::npos);

  // replicate-infer needs the rejection-sampler settings.
  fs::path infer_cfg = temp_file("wrong_estimator.json");
  write_file(infer_cfg, R"({
    "model": {"name": "toy"},
    "estimator": {"kind": "lbkld_partition"},
    "design": {"kind": "point", "coords": [5]}
  })");
  RunResult wrong2 = run_cli("replicate-infer --config " + infer_cfg.string());
  CHECK(wrong2.status != 0);
  CHECK(wrong2.output.find("d_posterior_precision") != std::string::npos);

  RunResult no_sub = run_cli("--config whatever.json");
  CHECK(no_sub.status != 0);
}
