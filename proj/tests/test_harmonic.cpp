#include <doctest.h>

#include <random>
#include <sstream>

#include "harmonium/harmonic.hpp"
#include "harmonium/selftest.hpp"

using namespace harmonium;

namespace {
Spaces snv_spaces(int depth_max = 4) {
  return Spaces{FillerSpace({"S", "N", "V"}), RoleSpace(2, depth_max)};
}

StructureVector john_runs(const Spaces& sp) {
  return bind("S", {}, sp) + bind("N", {0}, sp) + bind("V", {1}, sp);
}

StructureVector runs_john(const Spaces& sp) {
  return bind("S", {}, sp) + bind("V", {0}, sp) + bind("N", {1}, sp);
}
}  // namespace

TEST_CASE("single rule matrices score matches, partial matches, and misses") {
  const Spaces sp = snv_spaces();

  const GrammarMatrix root_s = rule_matrix(HarmonicRule::root("S"), sp);
  CHECK(harmony(bind("S", {}, sp), root_s) == 1.0);

  const GrammarMatrix prod = rule_matrix(HarmonicRule::production("S", "N", "V"), sp);
  CHECK(harmony(john_runs(sp), prod) == 1.0);
  CHECK(harmony(runs_john(sp), prod) == 0.0);
  CHECK(harmony(bind("S", {}, sp) + bind("N", {0}, sp), prod) == 0.5);
  CHECK(harmony(bind("N", {0}, sp) + bind("V", {1}, sp), prod) == 0.0);  // no parent
}

TEST_CASE("the worked intransitive grammar gives H=2 and H=1") {
  const Spaces sp = snv_spaces();
  const GrammarMatrix g = grammar_matrix(
      {HarmonicRule::production("S", "N", "V"), HarmonicRule::root("S")}, sp);

  const StructureVector good = john_runs(sp);
  const StructureVector flipped = runs_john(sp);
  CHECK(harmony(good, g) == 2.0);
  CHECK(harmony(flipped, g) == 1.0);

  // dense quadratic form agrees with the sparse path
  CHECK(dense_harmony(good, g) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dense_harmony(flipped, g) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weights scale the quadratic form linearly") {
  const Spaces sp = snv_spaces();
  const GrammarMatrix doubled = grammar_matrix(
      {HarmonicRule::production("S", "N", "V", {}, 2.0), HarmonicRule::root("S", 2.0)}, sp);
  CHECK(harmony(john_runs(sp), doubled) == 4.0);

  const GrammarMatrix empty = grammar_matrix({}, sp);
  CHECK(harmony(john_runs(sp), empty) == 0.0);
  CHECK(harmony(StructureVector(sp), empty) == 0.0);
}

TEST_CASE("harmony of the zero structure vanishes") {
  const Spaces sp = snv_spaces();
  const GrammarMatrix g = grammar_matrix(
      {HarmonicRule::production("S", "N", "V"), HarmonicRule::root("S")}, sp);
  CHECK(harmony(StructureVector(sp), g) == 0.0);
}

TEST_CASE("anchored instantiation enumerates shallow paths") {
  const RoleSpace roles(2, 2);
  const auto anchored =
      instantiate_rule_at_all_anchors(HarmonicRule::production("S", "N", "V"), roles);
  REQUIRE(anchored.size() == 3);
  CHECK(anchored[0].anchor == TreePath{});
  CHECK(anchored[1].anchor == TreePath{0});
  CHECK(anchored[2].anchor == TreePath{1});

  const auto root_only = instantiate_rule_at_all_anchors(HarmonicRule::root("S"), roles);
  REQUIRE(root_only.size() == 1);
  CHECK(root_only[0].anchor == TreePath{});
}

TEST_CASE("recursive embeddings count at every anchor") {
  const Spaces sp = snv_spaces(3);
  std::vector<HarmonicRule> rules =
      instantiate_rule_at_all_anchors(HarmonicRule::production("S", "N", "V"), sp.roles);
  rules.push_back(HarmonicRule::root("S"));
  const GrammarMatrix g = grammar_matrix(rules, sp);

  StructureVector s = john_runs(sp);
  s = s + bind("S", {1}, sp) + bind("N", {1, 0}, sp) + bind("V", {1, 1}, sp);
  CHECK(harmony(s, g) == 3.0);
  CHECK(dense_harmony(s, g) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("the dense matrix is symmetric entry-exact") {
  const Spaces sp = snv_spaces(3);
  std::vector<HarmonicRule> rules =
      instantiate_rule_at_all_anchors(HarmonicRule::production("S", "N", "V"), sp.roles);
  rules.push_back(HarmonicRule::root("S"));
  rules.push_back(HarmonicRule::production("V", "S", "N", {1}, 0.7));
  const Eigen::MatrixXd W = grammar_matrix(rules, sp).dense(3);
  const Eigen::MatrixXd Wt = W.transpose();
  CHECK((W.array() == Wt.array()).all());
}

TEST_CASE("harmony is linear in the rule weights") {
  std::mt19937_64 rng(60);
  const Spaces sp = snv_spaces(3);
  std::uniform_real_distribution<double> w_d(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> filler_d(0, 2);

  for (int c = 0; c < 50; ++c) {
    std::vector<HarmonicRule> rules;
    for (int k = 0; k < 4; ++k) {
      if (k % 2) {
        rules.push_back(HarmonicRule::root(sp.fillers.symbol(filler_d(rng)), w_d(rng)));
      } else {
        rules.push_back(HarmonicRule::production(
            sp.fillers.symbol(filler_d(rng)), sp.fillers.symbol(filler_d(rng)),
            sp.fillers.symbol(filler_d(rng)), selftest::random_path(rng, sp.roles, 2),
            w_d(rng)));
      }
    }
    StructureVector s(sp);
    for (int k = 0; k < 6; ++k)
      s.add(filler_d(rng), selftest::random_path(rng, sp.roles, 3), 1.0);

    double parts = 0.0;
    for (const HarmonicRule& r : rules)
      parts += r.weight * harmony(s, rule_matrix([&] {
                 HarmonicRule unit = r;
                 unit.weight = 1.0;
                 return unit;
               }(), sp));
    CHECK(harmony(s, grammar_matrix(rules, sp)) ==
          doctest::Approx(parts).epsilon(1e-12));
  }
}

TEST_CASE("positive scaling of all weights preserves harmony ordering") {
  const Spaces sp = snv_spaces();
  for (double c : {0.1, 1.0, 8.0}) {
    const GrammarMatrix g = grammar_matrix(
        {HarmonicRule::production("S", "N", "V", {}, c), HarmonicRule::root("S", c)}, sp);
    CHECK(harmony(john_runs(sp), g) > harmony(runs_john(sp), g));
  }
}

TEST_CASE("space mismatches and unknown fillers are rejected") {
  const Spaces sp = snv_spaces();
  const Spaces other{FillerSpace({"S", "N"}), RoleSpace(2, 4)};
  const GrammarMatrix g = grammar_matrix({HarmonicRule::root("S")}, sp);
  CHECK_THROWS_AS(harmony(StructureVector(other), g), SpaceMismatchError);
  CHECK_THROWS_AS(grammar_matrix({HarmonicRule::root("Q")}, sp), UnknownFillerError);
  CHECK_THROWS_AS(grammar_matrix({HarmonicRule::production("S", "N", "Q")}, sp),
                  UnknownFillerError);
  // production children would land below depth_max
  const Spaces shallow{FillerSpace({"S", "N", "V"}), RoleSpace(2, 1)};
  CHECK_THROWS_AS(
      grammar_matrix({HarmonicRule::production("S", "N", "V", {0})}, shallow),
      DepthExceededError);
}

TEST_CASE("grammar files parse rules, roots, and comments") {
  std::istringstream in(
      "# intransitive grammar\n"
      "rule 1 S -> N V\n"
      "root 1 S\n"
      "\n"
      "rule 0.5 V -> V N\n");
  const auto rules = parse_grammar(in);
  REQUIRE(rules.size() == 3);
  CHECK(rules[0].kind == RuleKind::Production);
  CHECK(rules[0].parent == "S");
  CHECK(rules[0].left == "N");
  CHECK(rules[0].right == "V");
  CHECK(rules[1].kind == RuleKind::Root);
  CHECK(rules[2].weight == 0.5);

  std::istringstream bad1("rule S -> N V\n");
  CHECK_THROWS_AS(parse_grammar(bad1), SyntaxError);
  std::istringstream bad2("rule 1 S => N V\n");
  CHECK_THROWS_AS(parse_grammar(bad2), SyntaxError);
  std::istringstream bad3("boot 1 S\n");
  CHECK_THROWS_AS(parse_grammar(bad3), SyntaxError);
  std::istringstream bad4("root 1 S S\n");
  CHECK_THROWS_AS(parse_grammar(bad4), SyntaxError);
}
