#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <chainminer/bif.hpp>
#include <chainminer/brute_force.hpp>
#include <chainminer/error.hpp>
#include <chainminer/inference.hpp>
#include <chainminer/rule.hpp>

#include "fixtures.hpp"

using namespace chainminer;

TEST_SUITE("brute_force") {

TEST_CASE("enumerates every nonempty antecedent against every consequent") {
  BayesianNetwork net = fixtures::two_var();
  BruteForceReport report = enumerate_all_rules(net, 1, 0.0);
  // One non-target binary variable: (3^1 - 1) antecedents times 2 states.
  CHECK(report.candidates == 4);
  CHECK(report.zero_evidence_skipped == 0);
  REQUIRE(report.rules.size() == 4);
  CHECK(report.average_probability() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::is_sorted(report.rules.begin(), report.rules.end(),
                       [](const ScoredRule& a, const ScoredRule& b) {
                         return rule_less(a.rule, b.rule);
                       }));
}

TEST_CASE("threshold retention is inclusive") {
  BayesianNetwork net = fixtures::two_var();
  BruteForceReport report = enumerate_all_rules(net, 1, 0.6);
  REQUIRE(report.rules.size() == 2);
  // Canonical order: (x0 => t1, P=0.8) before (x1 => t0, P=0.6).
  CHECK(report.rules[0].probability == 0.8);
  CHECK(report.rules[1].probability == 0.6);
  CHECK(report.average_probability() == doctest::Approx(0.7).epsilon(1e-15));

  // P = 0.8 survives a threshold of exactly 0.8.
  BruteForceReport at = enumerate_all_rules(net, 1, 0.8);
  REQUIRE(at.rules.size() == 1);
  CHECK(at.rules[0].probability == 0.8);
}

TEST_CASE("impossible antecedents are counted and skipped") {
  BayesianNetwork net = fixtures::zero_net();
  BruteForceReport report = enumerate_all_rules(net, 1, 0.0);
  CHECK(report.candidates == 4);
  CHECK(report.zero_evidence_skipped == 2);  // A = a1, both consequents
  CHECK(report.rules.size() == 2);
}

TEST_CASE("empty reports refuse to average") {
  BayesianNetwork net = fixtures::two_var();
  BruteForceReport report = enumerate_all_rules(net, 1, 1.0);
  CHECK(report.empty());
  CHECK_THROWS_AS(report.average_probability(), EmptySetError);
}

TEST_CASE("argument domains") {
  BayesianNetwork net = fixtures::two_var();
  CHECK_THROWS_AS(enumerate_all_rules(net, 1, -0.1), ArgumentError);
  CHECK_THROWS_AS(enumerate_all_rules(net, 1, 1.1), ArgumentError);
  CHECK_THROWS_AS(enumerate_all_rules(net, 9, 0.5), ArgumentError);
}

TEST_CASE("frozen asia sweep") {
  BayesianNetwork net = load_bundled("asia");
  BruteForceReport report = enumerate_all_rules(net, 7, 0.7);
  CHECK(report.candidates == 4372);  // (3^7 - 1) * 2
  CHECK(report.zero_evidence_skipped == 972);
  CHECK(report.rules.size() == 1471);
  CHECK(report.average_probability() ==
        doctest::Approx(0.8118675302784194).epsilon(1e-13));

  // Every retained probability reaches the threshold and re-verifies
  // exactly through the inference path.
  PosteriorCache cache(net);
  for (const ScoredRule& s : report.rules) {
    CHECK(s.probability >= 0.7);
    Query q{7, s.rule.target_state, rule_evidence(s.rule, net)};
    CHECK(s.probability == cache.query(q));
  }
}

TEST_CASE("free average matches the report helper") {
  BayesianNetwork net = fixtures::two_var();
  BruteForceReport report = enumerate_all_rules(net, 1, 0.6);
  CHECK(average_probability(report.rules) == report.average_probability());
  CHECK_THROWS_AS(average_probability({}), EmptySetError);
}

}  // TEST_SUITE
