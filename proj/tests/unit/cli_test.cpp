#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <chainminer/bif.hpp>
#include <chainminer/inference.hpp>
#include <chainminer/rule.hpp>
#include <chainminer/rules_csv.hpp>

using namespace chainminer;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "chainminer_cli_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

// Environment prefixes rely on system() invoking /bin/sh.
RunResult run_tool(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  fs::path out_file = scratch_root() / ("stdout" + std::to_string(counter));
  fs::path err_file = scratch_root() / ("stderr" + std::to_string(counter));
  ++counter;
  std::string cmd = (env.empty() ? std::string() : env + " ") +
                    CHAINMINER_TOOL_PATH +
                    " " + args + " >" + out_file.string() + " 2>" +
                    err_file.string();
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WEXITSTATUS(raw);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("extract is deterministic and writes verifiable probabilities") {
  fs::path a = scratch_root() / "xa";
  fs::path b = scratch_root() / "xb";
  RunResult ra = run_tool("extract --network asia --target dysp --seed 5 --out " +
                          a.string());
  REQUIRE(ra.code == 0);
  CHECK(count_lines(ra.out) == 1);
  CHECK(ra.err.empty());
  RunResult rb = run_tool("extract --network asia --target dysp --seed 5 --out " +
                          b.string());
  REQUIRE(rb.code == 0);
  CHECK(slurp(a / "asia_dysp_rules.csv") == slurp(b / "asia_dysp_rules.csv"));
  CHECK(slurp(a / "asia_dysp_trace.csv") == slurp(b / "asia_dysp_trace.csv"));
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));

  // Every probability column re-verifies through the inference path.
  BayesianNetwork net = load_bundled("asia");
  PosteriorCache cache(net);
  std::vector<ScoredRule> rules =
      rules_from_csv(slurp(a / "asia_dysp_rules.csv"), net, 7);
  CHECK(!rules.empty());
  for (const ScoredRule& s : rules) {
    Query q{7, s.rule.target_state, rule_evidence(s.rule, net)};
    CHECK(s.probability == cache.query(q));
  }
}

TEST_CASE("rerun reproduces an extract byte for byte") {
  fs::path a = scratch_root() / "ra";
  fs::path b = scratch_root() / "rb";
  REQUIRE(run_tool("extract --network cancer --target Cancer --seed 3 --out " +
                   a.string())
              .code == 0);
  REQUIRE(run_tool("rerun --manifest " + (a / "manifest.json").string() +
                   " --out " + b.string())
              .code == 0);
  for (const char* name :
       {"cancer_Cancer_rules.csv", "cancer_Cancer_trace.csv", "manifest.json"}) {
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("brute writes a summary that matches its table") {
  fs::path dir = scratch_root() / "brute";
  RunResult r = run_tool("brute --network survey --target T --threshold 0.7 --out " +
                         dir.string());
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 1);
  std::string summary = slurp(dir / "survey_T_brute.json");
  CHECK(summary.find("\"rule_count\": 36") != std::string::npos);
  BayesianNetwork net = load_bundled("survey");
  std::vector<ScoredRule> rules = rules_from_csv(
      slurp(dir / "survey_T_brute.csv"), net, *net.find_variable("T"));
  CHECK(rules.size() == 36);
}

TEST_CASE("chain renders extract output") {
  fs::path dir = scratch_root() / "chain";
  REQUIRE(run_tool("extract --network asia --target dysp --seed 2 --out " +
                   dir.string())
              .code == 0);
  RunResult r = run_tool("chain --network asia --target dysp --rules " +
                         (dir / "asia_dysp_rules.csv").string() + " --out " +
                         dir.string());
  REQUIRE(r.code == 0);
  std::string dot = slurp(dir / "asia_dysp_chain.dot");
  CHECK(dot.rfind("digraph chain {", 0) == 0);
  fs::path dir2 = scratch_root() / "chain2";
  REQUIRE(run_tool("rerun --manifest " + (dir / "manifest.json").string() +
                   " --out " + dir2.string())
              .code == 0);
  CHECK(slurp(dir2 / "asia_dysp_chain.dot") == dot);
}

TEST_CASE("eval emits one summary row per network and one count row per run") {
  fs::path dir = scratch_root() / "eval";
  RunResult r = run_tool(
      "eval --networks cancer --repeats 2 --seed 1 --out " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(count_lines(slurp(dir / "eval_summary.csv")) == 2);
  CHECK(count_lines(slurp(dir / "eval_rule_counts.csv")) == 3);
  fs::path dir2 = scratch_root() / "eval2";
  REQUIRE(run_tool("rerun --manifest " + (dir / "manifest.json").string() +
                   " --out " + dir2.string())
              .code == 0);
  CHECK(slurp(dir2 / "eval_summary.csv") == slurp(dir / "eval_summary.csv"));
  CHECK(slurp(dir2 / "eval_rule_counts.csv") ==
        slurp(dir / "eval_rule_counts.csv"));
  CHECK(slurp(dir2 / "manifest.json") == slurp(dir / "manifest.json"));
}

TEST_CASE("seed precedence is flag over environment") {
  fs::path a = scratch_root() / "env_only";
  RunResult r = run_tool("extract --network asia --target dysp --out " +
                             a.string(),
                         "CHAINMINER_SEED=9");
  REQUIRE(r.code == 0);
  CHECK(slurp(a / "manifest.json").find("\"seed\": 9") != std::string::npos);

  fs::path b = scratch_root() / "env_flag";
  r = run_tool("extract --network asia --target dysp --seed 4 --out " +
                   b.string(),
               "CHAINMINER_SEED=9");
  REQUIRE(r.code == 0);
  CHECK(slurp(b / "manifest.json").find("\"seed\": 4") != std::string::npos);
}

TEST_CASE("usage and validation failures exit with code 2") {
  CHECK(run_tool("extract --network asia").code == 2);
  CHECK(run_tool("extract --network nowhere --target dysp").code == 2);
  CHECK(run_tool("brute --network asia --target dysp --threshold 1.5").code ==
        2);
  CHECK(run_tool("eval --networks cancer --repeats 0").code == 2);
  CHECK(run_tool("frobnicate").code == 2);

  fs::path dir = scratch_root() / "errs";
  fs::create_directories(dir);
  {
    std::ofstream empty(dir / "empty.csv");
    empty << "asia,tub,smoke,lung,bronc,either,xray,dysp,probability\n";
  }
  RunResult r = run_tool("chain --network asia --target dysp --rules " +
                         (dir / "empty.csv").string());
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "asia,tub,smoke,lung,bronc,either,xray,dysp,probability\n"
           "no,*,*,*,*,*,*,bogus,0.5\n";
  }
  r = run_tool("chain --network asia --target dysp --rules " +
               (dir / "bad.csv").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  {
    std::ofstream cfg(dir / "bad_config.json");
    cfg << "{\"bogus\": 1}";
  }
  r = run_tool("extract --network asia --target dysp --config " +
               (dir / "bad_config.json").string());
  CHECK(r.code == 2);
}

}  // TEST_SUITE
