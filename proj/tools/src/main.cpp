#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <chainminer/bif.hpp>
#include <chainminer/brute_force.hpp>
#include <chainminer/chain_graph.hpp>
#include <chainminer/error.hpp>
#include <chainminer/ga.hpp>
#include <chainminer/network.hpp>
#include <chainminer/rule.hpp>
#include <chainminer/rules_csv.hpp>
#include <chainminer/text.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace chainminer;

namespace {

constexpr const char* kToolName = "chainminer";

#ifndef CHAINMINER_VERSION
#define CHAINMINER_VERSION "0.0.0"
#endif

int fail(const std::string& message, int code) {
  std::cerr << kToolName << ": " << message << "\n";
  return code;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.flush();
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

// File paths are stored in manifests in absolute form so a rerun does not
// depend on the working directory. Bundled names pass through untouched.
std::string absolute_if_file(const std::string& given) {
  std::error_code ec;
  if (fs::exists(given, ec)) return fs::absolute(given).lexically_normal().string();
  return given;
}

int resolve_target(const BayesianNetwork& net, const std::string& name) {
  auto idx = net.find_variable(name);
  if (!idx) {
    throw ArgumentError("network '" + net.name() + "' has no variable named '" +
                        name + "'");
  }
  return *idx;
}

// Lexicographically first sink node; every acyclic network has one.
int default_target(const BayesianNetwork& net) {
  int best = -1;
  for (int v = 0; v < net.num_variables(); ++v) {
    if (!net.children(v).empty()) continue;
    if (best < 0 || net.variable(v).name < net.variable(best).name) best = v;
  }
  return best;
}

std::vector<std::string> split_list(const std::string& text,
                                    const std::string& flag) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    parts.push_back(text.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (const std::string& p : parts) {
    if (p.empty()) throw ArgumentError(flag + " has an empty entry");
  }
  return parts;
}

std::optional<std::uint64_t> env_seed() {
  const char* text = std::getenv("CHAINMINER_SEED");
  if (!text || !*text) return std::nullopt;
  std::uint64_t value = 0;
  const char* end = text + std::strlen(text);
  auto [ptr, ec] = std::from_chars(text, end, value, 10);
  if (ec != std::errc() || ptr != end) {
    throw ArgumentError("CHAINMINER_SEED must be an unsigned integer, got '" +
                        std::string(text) + "'");
  }
  return value;
}

// Optimizer settings as a flat JSON object; every key optional, unknown keys
// rejected. The same schema appears under "config" in extract manifests.
GaConfig apply_config_json(const json& j, GaConfig cfg) {
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  static const std::set<std::string> known = {
      "pop_size",       "gen_max",        "tournament_size",
      "alpha",          "gen_max_local",  "mask_prob",
      "max_rules",      "init_rules_min", "init_rules_max",
      "pairs_per_generation", "seed",     "beta",
      "gamma"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ArgumentError("unknown config key '" + item.key() + "'");
    }
  }
  auto get_int = [&](const char* key, int& dst) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
      throw ArgumentError(std::string("config key '") + key +
                          "' must be an integer");
    }
    dst = v.get<int>();
  };
  auto get_double = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) {
      throw ArgumentError(std::string("config key '") + key +
                          "' must be a number");
    }
    dst = v.get<double>();
  };
  get_int("pop_size", cfg.pop_size);
  get_int("gen_max", cfg.gen_max);
  get_int("tournament_size", cfg.tournament_size);
  get_double("alpha", cfg.alpha);
  get_int("gen_max_local", cfg.gen_max_local);
  get_double("mask_prob", cfg.mask_prob);
  get_int("max_rules", cfg.max_rules);
  get_int("init_rules_min", cfg.init_rules_min);
  get_int("init_rules_max", cfg.init_rules_max);
  get_int("pairs_per_generation", cfg.pairs_per_generation);
  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned()) {
      throw ArgumentError("config key 'seed' must be a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  get_double("beta", cfg.fitness.beta);
  get_double("gamma", cfg.fitness.gamma);
  return cfg;
}

GaConfig load_config_file(const std::string& path) {
  std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ArgumentError("config file " + path + ": " + e.what());
  }
  return apply_config_json(j, GaConfig{});
}

// Seed is kept out of this object; manifests record it as a sibling field.
json config_to_json(const GaConfig& cfg) {
  json j;
  j["pop_size"] = cfg.pop_size;
  j["gen_max"] = cfg.gen_max;
  j["tournament_size"] = cfg.tournament_size;
  j["alpha"] = cfg.alpha;
  j["gen_max_local"] = cfg.gen_max_local;
  j["mask_prob"] = cfg.mask_prob;
  j["max_rules"] = cfg.max_rules;
  j["init_rules_min"] = cfg.init_rules_min;
  j["init_rules_max"] = cfg.init_rules_max;
  j["pairs_per_generation"] = cfg.pairs_per_generation;
  j["beta"] = cfg.fitness.beta;
  j["gamma"] = cfg.fitness.gamma;
  return j;
}

json source_json(const NetworkSource& src) {
  json j;
  j["source"] = src.given;
  j["bundled"] = src.bundled;
  j["label"] = src.label;
  return j;
}

json manifest_header(const char* command) {
  json j;
  j["tool"] = kToolName;
  j["version"] = CHAINMINER_VERSION;
  j["command"] = command;
  return j;
}

void write_manifest(const fs::path& out_dir, const json& manifest) {
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

// Distinct rules of a chromosome in canonical order, each with its
// conditional probability.
std::vector<ScoredRule> score_distinct(const Chromosome& c,
                                       FitnessEvaluator& eval) {
  std::vector<Rule> rules = c.rules;
  std::sort(rules.begin(), rules.end(), rule_less);
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  std::vector<ScoredRule> scored;
  scored.reserve(rules.size());
  for (const Rule& r : rules) scored.push_back({r, eval.probability(r)});
  return scored;
}

struct ExtractRequest {
  std::string network;
  std::string target;
  GaConfig cfg;
  fs::path out = ".";
};

int run_extract(const ExtractRequest& req) {
  NetworkSource src = resolve_network_source(req.network);
  BayesianNetwork net = open_network(src);
  int target = resolve_target(net, req.target);
  GaResult result = run(net, target, req.cfg);

  FitnessParams params = req.cfg.fitness;
  params.target = target;
  FitnessEvaluator eval(net, params);
  std::vector<ScoredRule> scored = score_distinct(result.best, eval);

  const std::string& target_name = net.variable(target).name;
  std::string rules_name = src.label + "_" + target_name + "_rules.csv";
  std::string trace_name = src.label + "_" + target_name + "_trace.csv";
  fs::create_directories(req.out);
  write_file(req.out / rules_name, rules_to_csv(scored, net, target));
  write_file(req.out / trace_name, trace_to_csv(result.trace));

  json manifest = manifest_header("extract");
  manifest["network"] = source_json(src);
  manifest["target"] = target_name;
  manifest["seed"] = req.cfg.seed;
  manifest["config"] = config_to_json(req.cfg);
  manifest["outputs"] = json::array({rules_name, trace_name});
  write_manifest(req.out, manifest);

  std::cout << "extract: " << scored.size() << " distinct rules, best fitness "
            << format_double(result.best_fitness) << ", outputs in "
            << req.out.string() << "\n";
  return 0;
}

struct BruteRequest {
  std::string network;
  std::string target;
  double threshold = 0.0;
  fs::path out = ".";
};

int run_brute(const BruteRequest& req) {
  NetworkSource src = resolve_network_source(req.network);
  BayesianNetwork net = open_network(src);
  int target = resolve_target(net, req.target);
  BruteForceReport report = enumerate_all_rules(net, target, req.threshold);

  const std::string& target_name = net.variable(target).name;
  std::string csv_name = src.label + "_" + target_name + "_brute.csv";
  std::string json_name = src.label + "_" + target_name + "_brute.json";

  json summary;
  summary["network"] = src.label;
  summary["target"] = target_name;
  summary["threshold"] = req.threshold;
  summary["candidates"] = report.candidates;
  summary["zero_evidence_skipped"] = report.zero_evidence_skipped;
  summary["rule_count"] = report.rules.size();
  summary["average_probability"] =
      report.empty() ? json(nullptr) : json(report.average_probability());

  fs::create_directories(req.out);
  write_file(req.out / csv_name, rules_to_csv(report.rules, net, target));
  write_file(req.out / json_name, summary.dump(2) + "\n");

  json manifest = manifest_header("brute");
  manifest["network"] = source_json(src);
  manifest["target"] = target_name;
  manifest["threshold"] = req.threshold;
  manifest["outputs"] = json::array({csv_name, json_name});
  write_manifest(req.out, manifest);

  std::cout << "brute: retained " << report.rules.size() << " of "
            << report.candidates << " candidates, average "
            << (report.empty() ? std::string("n/a")
                               : format_double(report.average_probability()))
            << ", outputs in " << req.out.string() << "\n";
  return 0;
}

struct ChainRequest {
  std::string network;
  std::string target;
  std::string rules_path;
  std::string mode = "path";
  fs::path out = ".";
};

int run_chain(const ChainRequest& req) {
  NetworkSource src = resolve_network_source(req.network);
  BayesianNetwork net = open_network(src);
  int target = resolve_target(net, req.target);

  std::vector<ScoredRule> scored =
      rules_from_csv(read_file(req.rules_path), net, target);
  if (scored.empty()) {
    throw ArgumentError("rule table " + req.rules_path + " contains no rules");
  }
  std::vector<Rule> rules;
  rules.reserve(scored.size());
  for (const ScoredRule& s : scored) rules.push_back(s.rule);

  ChainMode mode = req.mode == "all" ? ChainMode::kAllChildren
                                     : ChainMode::kPathToTarget;
  ChainGraph graph = build_chain_graph(rules, net, target, mode);
  std::set<int> nodes{target};
  for (const ChainEdge& e : graph.edges) {
    nodes.insert(e.from);
    nodes.insert(e.to);
  }

  const std::string& target_name = net.variable(target).name;
  std::string dot_name = src.label + "_" + target_name + "_chain.dot";
  fs::create_directories(req.out);
  write_file(req.out / dot_name, to_dot(graph, net));

  json manifest = manifest_header("chain");
  manifest["network"] = source_json(src);
  manifest["target"] = target_name;
  manifest["rules_input"] = req.rules_path;
  manifest["mode"] = req.mode;
  manifest["outputs"] = json::array({dot_name});
  write_manifest(req.out, manifest);

  std::cout << "chain: " << graph.edges.size() << " edges over "
            << nodes.size() << " nodes, outputs in " << req.out.string()
            << "\n";
  return 0;
}

struct EvalRequest {
  std::vector<std::string> networks;
  std::vector<std::string> targets;  // empty, or one name per network
  int repeats = 0;
  double threshold = 0.7;
  std::uint64_t seed = 0;
  fs::path out = ".";
};

double sample_stddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

int run_eval(const EvalRequest& req) {
  if (req.repeats < 1) throw ArgumentError("--repeats must be at least 1");
  if (!(req.threshold >= 0.0 && req.threshold <= 1.0)) {
    throw ArgumentError("--threshold must lie in [0, 1]");
  }
  if (!req.targets.empty() && req.targets.size() != req.networks.size()) {
    throw ArgumentError("--targets must list one variable per network");
  }

  std::string summary_csv =
      "network,target,ga_mean_probability,ga_stddev_probability,"
      "brute_average_probability\n";
  std::string counts_csv = "network,run,seed,rule_count,average_probability\n";
  json networks_json = json::array();

  for (std::size_t i = 0; i < req.networks.size(); ++i) {
    NetworkSource src = resolve_network_source(req.networks[i]);
    BayesianNetwork net = open_network(src);
    int target = req.targets.empty() ? default_target(net)
                                     : resolve_target(net, req.targets[i]);
    const std::string& target_name = net.variable(target).name;

    BruteForceReport brute = enumerate_all_rules(net, target, req.threshold);

    FitnessParams params;
    params.target = target;
    FitnessEvaluator eval(net, params);

    // Per run: distinct rules of the best chromosome that meet the
    // threshold; their mean probability feeds the summary row.
    std::vector<double> run_means;
    for (int r = 0; r < req.repeats; ++r) {
      GaConfig cfg;
      cfg.seed = req.seed + static_cast<std::uint64_t>(r);
      GaResult result = run(net, target, cfg);
      double sum = 0.0;
      int kept = 0;
      for (const ScoredRule& s : score_distinct(result.best, eval)) {
        if (s.probability >= req.threshold) {
          sum += s.probability;
          ++kept;
        }
      }
      counts_csv += src.label + "," + std::to_string(r + 1) + "," +
                    std::to_string(cfg.seed) + "," + std::to_string(kept) +
                    ",";
      if (kept > 0) {
        double mean = sum / kept;
        counts_csv += format_double(mean);
        run_means.push_back(mean);
      }
      counts_csv += "\n";
    }

    summary_csv += src.label + "," + target_name + ",";
    if (!run_means.empty()) {
      double mean = 0.0;
      for (double m : run_means) mean += m;
      mean /= static_cast<double>(run_means.size());
      summary_csv += format_double(mean) + "," +
                     format_double(sample_stddev(run_means, mean));
    } else {
      summary_csv += ",";
    }
    summary_csv += ",";
    if (!brute.empty()) summary_csv += format_double(brute.average_probability());
    summary_csv += "\n";

    json entry = source_json(src);
    entry["target"] = target_name;
    networks_json.push_back(entry);
  }

  fs::create_directories(req.out);
  write_file(req.out / "eval_summary.csv", summary_csv);
  write_file(req.out / "eval_rule_counts.csv", counts_csv);

  json manifest = manifest_header("eval");
  manifest["networks"] = networks_json;
  manifest["repeats"] = req.repeats;
  manifest["threshold"] = req.threshold;
  manifest["seed"] = req.seed;
  manifest["outputs"] =
      json::array({"eval_summary.csv", "eval_rule_counts.csv"});
  write_manifest(req.out, manifest);

  std::cout << "eval: " << req.networks.size() << " networks, " << req.repeats
            << " repeats, outputs in " << req.out.string() << "\n";
  return 0;
}

// Replays a recorded run. Every knob comes from the manifest, so the outputs
// (manifest included) come out byte-identical; --seed and CHAINMINER_SEED are
// deliberately ignored.
int run_rerun(const std::string& manifest_path, const fs::path& out) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw ArgumentError("manifest " + manifest_path + ": " + e.what());
  }
  try {
    std::string command = manifest.at("command").get<std::string>();
    if (command == "extract") {
      ExtractRequest r;
      r.network = manifest.at("network").at("source").get<std::string>();
      r.target = manifest.at("target").get<std::string>();
      r.cfg = apply_config_json(manifest.at("config"), GaConfig{});
      r.cfg.seed = manifest.at("seed").get<std::uint64_t>();
      r.out = out;
      return run_extract(r);
    }
    if (command == "brute") {
      BruteRequest r;
      r.network = manifest.at("network").at("source").get<std::string>();
      r.target = manifest.at("target").get<std::string>();
      r.threshold = manifest.at("threshold").get<double>();
      r.out = out;
      return run_brute(r);
    }
    if (command == "chain") {
      ChainRequest r;
      r.network = manifest.at("network").at("source").get<std::string>();
      r.target = manifest.at("target").get<std::string>();
      r.rules_path = manifest.at("rules_input").get<std::string>();
      r.mode = manifest.at("mode").get<std::string>();
      r.out = out;
      return run_chain(r);
    }
    if (command == "eval") {
      EvalRequest r;
      for (const json& entry : manifest.at("networks")) {
        r.networks.push_back(entry.at("source").get<std::string>());
        r.targets.push_back(entry.at("target").get<std::string>());
      }
      r.repeats = manifest.at("repeats").get<int>();
      r.threshold = manifest.at("threshold").get<double>();
      r.seed = manifest.at("seed").get<std::uint64_t>();
      r.out = out;
      return run_eval(r);
    }
    throw ArgumentError("manifest records unknown command '" + command + "'");
  } catch (const json::exception& e) {
    throw ArgumentError("manifest " + manifest_path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic rule extraction over discrete Bayesian networks",
               kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CHAINMINER_VERSION));

  std::string x_network, x_target, x_config, x_out = ".";
  std::uint64_t x_seed = 0;
  CLI::App* extract = app.add_subcommand(
      "extract", "Evolve a rule set for one target variable");
  extract->add_option("--network", x_network,
                      "Bundled network name or path to a network file")
      ->required();
  extract->add_option("--target", x_target, "Consequent variable")->required();
  CLI::Option* x_config_opt = extract->add_option(
      "--config", x_config, "JSON file of optimizer settings");
  CLI::Option* x_seed_opt =
      extract->add_option("--seed", x_seed, "Random seed");
  extract->add_option("--out", x_out, "Output directory");

  std::string b_network, b_target, b_out = ".";
  double b_threshold = 0.0;
  CLI::App* brute = app.add_subcommand(
      "brute", "Score every rule exhaustively and keep those at or above a "
               "probability threshold");
  brute->add_option("--network", b_network,
                    "Bundled network name or path to a network file")
      ->required();
  brute->add_option("--target", b_target, "Consequent variable")->required();
  brute->add_option("--threshold", b_threshold, "Retention threshold in [0, 1]")
      ->required();
  brute->add_option("--out", b_out, "Output directory");

  std::string c_network, c_target, c_rules, c_mode = "path", c_out = ".";
  CLI::App* chain = app.add_subcommand(
      "chain", "Render a rule table as a labeled dependency graph");
  chain->add_option("--network", c_network,
                    "Bundled network name or path to a network file")
      ->required();
  chain->add_option("--target", c_target, "Consequent variable")->required();
  chain->add_option("--rules", c_rules, "Rule table CSV")->required();
  chain->add_option("--mode", c_mode,
                    "Edge filter: 'path' keeps children that can reach the "
                    "target, 'all' keeps every child")
      ->check(CLI::IsMember({"all", "path"}));
  chain->add_option("--out", c_out, "Output directory");

  std::string e_networks, e_targets, e_out = ".";
  int e_repeats = 0;
  double e_threshold = 0.7;
  std::uint64_t e_seed = 0;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Compare evolved rules against the exhaustive baseline across "
              "networks");
  eval_cmd->add_option("--networks", e_networks,
                       "Comma-separated bundled names or file paths")
      ->required();
  eval_cmd->add_option("--targets", e_targets,
                       "Comma-separated consequent variables, one per "
                       "network; defaults to each network's first sink");
  eval_cmd->add_option("--repeats", e_repeats, "Optimizer runs per network")
      ->required();
  eval_cmd->add_option("--threshold", e_threshold,
                       "Retention threshold in [0, 1]");
  CLI::Option* e_seed_opt =
      eval_cmd->add_option("--seed", e_seed, "Base seed; run r uses seed + r");
  eval_cmd->add_option("--out", e_out, "Output directory");

  std::string r_manifest, r_out = ".";
  CLI::App* rerun = app.add_subcommand(
      "rerun", "Reproduce a recorded run from its manifest");
  rerun->add_option("--manifest", r_manifest, "Path to a manifest.json")
      ->required();
  rerun->add_option("--out", r_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(extract)) {
      ExtractRequest r;
      r.network = absolute_if_file(x_network);
      r.target = x_target;
      if (*x_config_opt) r.cfg = load_config_file(x_config);
      if (auto seed = env_seed()) r.cfg.seed = *seed;
      if (*x_seed_opt) r.cfg.seed = x_seed;
      r.out = x_out;
      return run_extract(r);
    }
    if (app.got_subcommand(brute)) {
      BruteRequest r;
      r.network = absolute_if_file(b_network);
      r.target = b_target;
      r.threshold = b_threshold;
      r.out = b_out;
      return run_brute(r);
    }
    if (app.got_subcommand(chain)) {
      ChainRequest r;
      r.network = absolute_if_file(c_network);
      r.target = c_target;
      r.rules_path = absolute_if_file(c_rules);
      r.mode = c_mode;
      r.out = c_out;
      return run_chain(r);
    }
    if (app.got_subcommand(eval_cmd)) {
      EvalRequest r;
      for (const std::string& n : split_list(e_networks, "--networks")) {
        r.networks.push_back(absolute_if_file(n));
      }
      if (!e_targets.empty()) r.targets = split_list(e_targets, "--targets");
      r.repeats = e_repeats;
      r.threshold = e_threshold;
      if (auto seed = env_seed()) r.seed = *seed;
      if (*e_seed_opt) r.seed = e_seed;
      r.out = e_out;
      return run_eval(r);
    }
    return run_rerun(r_manifest, r_out);
  } catch (const ArgumentError& e) {
    return fail(e.what(), 2);
  } catch (const ParseError& e) {
    return fail(e.what(), 2);
  } catch (const StructureError& e) {
    return fail(e.what(), 2);
  } catch (const std::exception& e) {
    return fail(e.what(), 1);
  }
}
