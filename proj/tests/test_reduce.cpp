#include <doctest.h>

#include <random>

#include "harmonium/reduce.hpp"
#include "harmonium/selftest.hpp"

using namespace harmonium;

namespace {
// "John is who Mary loves": n | n^r s n^l | n^r n n^ll s^l | n | n^r s n^l
const char* kRelativeClause = "n n^r s n^l n^r n n^ll s^l n n^r s n^l";
}  // namespace

TEST_CASE("SVO type string reduces to the sentence type") {
  const Reduction r = max_reduction(parse_type("n n^r s n^l n"));
  CHECK(r.links == std::vector<Link>{{0, 1}, {3, 4}});
  CHECK(r.residual == parse_type("s"));
  CHECK(valid_reduction(r));
  CHECK(is_grammatical(r, BaseType{"s"}));
}

TEST_CASE("the unit type reduces to itself") {
  const Reduction r = max_reduction(PregroupType::unit());
  CHECK(r.links.empty());
  CHECK(r.residual.is_unit());
  CHECK_FALSE(is_grammatical(r, BaseType{"s"}));
}

TEST_CASE("adjacent pair chains reduce fully") {
  const Reduction r = max_reduction(parse_type("n n^r n n^r"));
  CHECK(r.links == std::vector<Link>{{0, 1}, {2, 3}});
  CHECK(r.residual.is_unit());
  // the exhaustive oracle confirms two links are maximal
  CHECK(brute_force_reduction(parse_type("n n^r n n^r")).links.size() == 2);
}

TEST_CASE("relative-clause string keeps four unreduced types") {
  const PregroupType t = parse_type(kRelativeClause);
  const Reduction r = max_reduction(t);
  CHECK(r.links == std::vector<Link>{{0, 1}, {6, 11}, {7, 10}, {8, 9}});
  CHECK(r.residual == parse_type("s n^l n^r n"));
  CHECK_FALSE(is_grammatical(r, BaseType{"s"}));
  CHECK(valid_reduction(r));

  const Reduction oracle = brute_force_reduction(t);
  CHECK(oracle.links.size() == r.links.size());
  CHECK(oracle.links == r.links);
}

TEST_CASE("brute force handles the small named cases") {
  const Reduction svo = brute_force_reduction(parse_type("n n^r s n^l n"));
  CHECK(svo.links.size() == 2);
  CHECK(svo.residual == parse_type("s"));

  const Reduction single = brute_force_reduction(parse_type("s"));
  CHECK(single.links.empty());
  CHECK(single.residual == parse_type("s"));

  PregroupType longest;
  for (int k = 0; k < 17; ++k) longest.simples.push_back(SimpleType{"n", 0});
  CHECK_THROWS_AS(brute_force_reduction(longest), InputTooLongError);
}

TEST_CASE("nested links are found through full interiors") {
  // n n n^r n^r: the outer pair only cancels once the inner pair is gone
  const Reduction r = max_reduction(parse_type("n n n^r n^r"));
  CHECK(r.links == std::vector<Link>{{0, 3}, {1, 2}});
  CHECK(r.residual.is_unit());
}

TEST_CASE("tie-breaking prefers the lexicographically smallest link set") {
  // both (0,1) and (1,2) are single-link options; (0,1) wins
  const Reduction r = max_reduction(parse_type("n n^r n^rr"));
  CHECK(r.links == std::vector<Link>{{0, 1}});
  CHECK(brute_force_reduction(parse_type("n n^r n^rr")).links == r.links);
}

TEST_CASE("is_grammatical wants exactly one plain sentence symbol") {
  CHECK_FALSE(is_grammatical(max_reduction(parse_type("s s")), BaseType{"s"}));
  CHECK_FALSE(is_grammatical(max_reduction(parse_type("s^l")), BaseType{"s"}));
  CHECK(is_grammatical(max_reduction(parse_type("z")), BaseType{"z"}));
  CHECK_FALSE(is_grammatical(max_reduction(parse_type("z")), BaseType{"s"}));
}

TEST_CASE("hand-built invalid reductions fail the direct-scan check") {
  const PregroupType t = parse_type("n n^r n n^r");
  Reduction crossing{t, {{0, 2}, {1, 3}}, {}};
  CHECK_FALSE(valid_reduction(crossing));

  Reduction wrong_pair{t, {{1, 2}}, detail::residual_of(t, {{1, 2}})};
  CHECK_FALSE(valid_reduction(wrong_pair));  // n^r n does not cancel

  Reduction gap{t, {{0, 3}}, detail::residual_of(t, {{0, 3}})};
  CHECK_FALSE(valid_reduction(gap));  // interior (1,2) unmatched

  Reduction stale{t, {{0, 1}}, t};
  CHECK_FALSE(valid_reduction(stale));  // residual not recomputed
}

TEST_CASE("DP agrees with the exhaustive oracle on random strings") {
  const auto res = selftest::run_reducer_oracle(12345, 300, 12);
  CHECK(res.failures == 0);
  for (const auto& msg : res.messages) MESSAGE(msg);
}

TEST_CASE("link count is superadditive under concatenation") {
  std::mt19937_64 rng(99);
  for (int c = 0; c < 200; ++c) {
    const PregroupType a = selftest::random_type_string(rng, 8);
    const PregroupType b = selftest::random_type_string(rng, 8);
    const std::size_t joint = max_reduction(a + b).links.size();
    CHECK(joint >= max_reduction(a).links.size() + max_reduction(b).links.size());
  }
}

TEST_CASE("grammatical strings have odd length and a full linking") {
  std::mt19937_64 rng(7331);
  std::uniform_int_distribution<int> steps_d(0, 5), deg_d(-2, 2), coin(0, 1);
  const std::vector<std::string> bases = {"n", "s"};
  int grammatical_seen = 0;
  for (int c = 0; c < 200; ++c) {
    // grow a type string from "s" by inserting adjacent cancelling pairs,
    // either (x, x^r) or (x^l, x); some maximal reduction then leaves one
    // simple type, so the link count is forced to (|t|-1)/2
    PregroupType t = parse_type("s");
    const int steps = steps_d(rng);
    for (int g = 0; g < steps; ++g) {
      const SimpleType x{bases[static_cast<std::size_t>(coin(rng))], deg_d(rng)};
      const bool right_pair = coin(rng) == 1;
      const SimpleType a = right_pair ? x : adjoint(x, Side::Left);
      const SimpleType b = right_pair ? adjoint(x, Side::Right) : x;
      std::uniform_int_distribution<std::size_t> pos_d(0, t.size());
      const std::size_t pos = pos_d(rng);
      t.simples.insert(t.simples.begin() + static_cast<std::ptrdiff_t>(pos), {a, b});
    }
    const Reduction r = max_reduction(t);
    REQUIRE(t.size() % 2 == 1);
    REQUIRE(r.links.size() == (t.size() - 1) / 2);
    REQUIRE(r.residual.size() == 1);
    // grammatical iff the surviving simple is the plain sentence type
    CHECK(is_grammatical(r, BaseType{"s"}) == (r.residual == parse_type("s")));
    if (is_grammatical(r, BaseType{"s"})) ++grammatical_seen;
  }
  CHECK(grammatical_seen > 100);

  // a tie among maximal linkings can strand a non-sentence simple: both
  // (0,1) and (1,2) are maximal here and the tie-break picks (0,1)
  const Reduction tie = max_reduction(parse_type("s s^r s^rr"));
  CHECK(tie.links == std::vector<Link>{{0, 1}});
  CHECK(tie.residual == parse_type("s^rr"));
  CHECK_FALSE(is_grammatical(tie, BaseType{"s"}));
}

TEST_CASE("DOT output draws links and red residual wires") {
  const Reduction r = max_reduction(parse_type("n n^r s n^l n"));
  const std::string dot = reduction_to_dot(r);
  CHECK(dot.find("t0 -- t1;") != std::string::npos);
  CHECK(dot.find("t3 -- t4;") != std::string::npos);
  CHECK(dot.find("t2 [label=\"s\", color=red, fontcolor=red];") != std::string::npos);
  CHECK(dot.find("t0 [label=\"n\"];") != std::string::npos);
}
