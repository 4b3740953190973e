#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <chainminer/bif.hpp>
#include <chainminer/error.hpp>
#include <chainminer/network.hpp>

using namespace chainminer;

namespace {

const char* kToy = R"(network toy {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
variable B {
  type discrete [ 3 ] { b0, b1, b2 };
}
probability ( A ) {
  table 0.3, 0.7;
}
probability ( B | A ) {
  (a1) 0.5, 0.25, 0.25;
  (a0) 0.2, 0.3, 0.5;
}
)";

}  // namespace

TEST_SUITE("bif") {

TEST_CASE("parses a toy network") {
  BayesianNetwork net = parse_network(kToy);
  CHECK(net.name() == "toy");
  CHECK(net.num_variables() == 2);
  CHECK(net.variable(1).states == std::vector<std::string>{"b0", "b1", "b2"});
  CHECK(net.cpt(0).table == std::vector<double>{0.3, 0.7});
  // Rows land in state order no matter how the file orders them.
  CHECK(net.cpt(1).entry(0, 0) == 0.2);
  CHECK(net.cpt(1).entry(0, 2) == 0.5);
  CHECK(net.cpt(1).entry(1, 0) == 0.5);
}

TEST_CASE("row index puts the last parent fastest") {
  const char* text = R"(network rowtest {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
variable B {
  type discrete [ 2 ] { b0, b1 };
}
variable C {
  type discrete [ 2 ] { c0, c1 };
}
probability ( A ) {
  table 0.5, 0.5;
}
probability ( B ) {
  table 0.5, 0.5;
}
probability ( C | A, B ) {
  (a1, b0) 0.4, 0.6;
  (a0, b1) 0.3, 0.7;
  (a0, b0) 0.2, 0.8;
  (a1, b1) 0.5, 0.5;
}
)";
  BayesianNetwork net = parse_network(text);
  CHECK(net.cpt(2).entry(0, 0) == 0.2);  // (a0, b0)
  CHECK(net.cpt(2).entry(1, 0) == 0.3);  // (a0, b1)
  CHECK(net.cpt(2).entry(2, 0) == 0.4);  // (a1, b0)
  CHECK(net.cpt(2).entry(3, 0) == 0.5);  // (a1, b1)
}

TEST_CASE("row sums within 1e-12 keep their bits") {
  std::string text = R"(network keep {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
probability ( A ) {
  table 0.1, 0.9000000000001;
}
)";
  BayesianNetwork net = parse_network(text);
  CHECK(net.cpt(0).table[0] == 0.1);
  CHECK(net.cpt(0).table[1] == 0.9000000000001);
}

TEST_CASE("row sums within 1e-6 renormalize") {
  std::string text = R"(network renorm {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
probability ( A ) {
  table 0.5, 0.5000001;
}
)";
  BayesianNetwork net = parse_network(text);
  const double sum = 0.5 + 0.5000001;
  CHECK(net.cpt(0).table[0] == 0.5 / sum);
  CHECK(net.cpt(0).table[1] == 0.5000001 / sum);
}

TEST_CASE("row sums beyond 1e-6 are rejected") {
  std::string text = R"(network bad {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
probability ( A ) {
  table 0.6, 0.6;
}
)";
  CHECK_THROWS_AS(parse_network(text), ParseError);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_network("network x {\n}\nvariable A ;\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("grammar violations raise ParseError") {
  // Unknown variable in a probability head.
  CHECK_THROWS_AS(parse_network("network x {\n}\nprobability ( Z ) {\n"
                                "  table 1.0;\n}\n"),
                  ParseError);
  // Duplicate row for the same parent configuration.
  std::string dup = R"(network x {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
variable B {
  type discrete [ 2 ] { b0, b1 };
}
probability ( A ) {
  table 0.5, 0.5;
}
probability ( B | A ) {
  (a0) 0.5, 0.5;
  (a0) 0.5, 0.5;
}
)";
  CHECK_THROWS_AS(parse_network(dup), ParseError);
  // Missing row for a1.
  std::string gap = R"(network x {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
variable B {
  type discrete [ 2 ] { b0, b1 };
}
probability ( A ) {
  table 0.5, 0.5;
}
probability ( B | A ) {
  (a0) 0.5, 0.5;
}
)";
  CHECK_THROWS_AS(parse_network(gap), ParseError);
  // A variable without a table.
  CHECK_THROWS_AS(parse_network("network x {\n}\nvariable A {\n"
                                "  type discrete [ 2 ] { a0, a1 };\n}\n"),
                  ParseError);
}

TEST_CASE("serialization round trips bit for bit") {
  for (const std::string& name : bundled_network_names()) {
    CAPTURE(name);
    BayesianNetwork net = load_bundled(name);
    std::string once = serialize_network(net);
    BayesianNetwork reparsed = parse_network(once);
    CHECK(serialize_network(reparsed) == once);
    for (int v = 0; v < net.num_variables(); ++v) {
      CHECK(reparsed.cpt(v).table == net.cpt(v).table);
    }
  }
}

TEST_CASE("bundled catalogue") {
  CHECK(bundled_network_names() ==
        std::vector<std::string>{"asia", "cancer", "earthquake", "sachs",
                                 "survey"});
  CHECK(is_bundled_network("ASIA"));
  CHECK(is_bundled_network("Cancer"));
  CHECK_FALSE(is_bundled_network("nope"));
  CHECK(load_bundled("Asia").name() == "asia");
}

TEST_CASE("bundled networks match their published shapes") {
  struct Row {
    const char* name;
    int nodes;
    int arcs;
    long long params;
  };
  const Row rows[] = {
      {"asia", 8, 8, 18},
      {"cancer", 5, 4, 10},
      {"earthquake", 5, 4, 10},
      {"sachs", 11, 17, 178},
      {"survey", 6, 6, 21},
  };
  for (const Row& row : rows) {
    CAPTURE(row.name);
    BayesianNetwork net = load_bundled(row.name);
    CHECK(net.num_variables() == row.nodes);
    CHECK(net.num_arcs() == row.arcs);
    CHECK(parameter_count(net) == row.params);
  }
}

TEST_CASE("network sources resolve to files or bundled names") {
  NetworkSource bundled = resolve_network_source("Asia");
  CHECK(bundled.bundled);
  CHECK(bundled.label == "asia");
  CHECK(open_network(bundled).num_variables() == 8);

  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "chainminer_toy_net.bif";
  {
    std::ofstream out(path);
    out << kToy;
  }
  NetworkSource file = resolve_network_source(path.string());
  CHECK_FALSE(file.bundled);
  CHECK(file.label == "chainminer_toy_net");
  CHECK(open_network(file).name() == "toy");
  fs::remove(path);

  CHECK_THROWS_AS(resolve_network_source("no_such_network"), ArgumentError);
}

}  // TEST_SUITE
