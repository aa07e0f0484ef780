#include <doctest.h>

#include <random>

#include "harmonium/grading.hpp"
#include "harmonium/selftest.hpp"

using namespace harmonium;

namespace {

Lexicon svo_lexicon() {
  Lexicon lex;
  lex.add("Priscilla", parse_type("n"));
  lex.add("eats", parse_type("n^r s n^l"));
  lex.add("bananas", parse_type("n"));
  return lex;
}

Lexicon relative_lexicon() {
  Lexicon lex;
  lex.add("John", parse_type("n"));
  lex.add("is", parse_type("n^r s n^l"));
  lex.add("who", parse_type("n^r n n^ll s^l"));
  lex.add("Mary", parse_type("n"));
  lex.add("loves", parse_type("n^r s n^l"));
  return lex;
}

const GradingWeights kDefault{};

}  // namespace

TEST_CASE("a full reduction earns link points plus the sentence bonus") {
  const Reduction r = max_reduction(parse_type("n n^r s n^l n"));
  const GradedScore s = grade(r, kDefault, BaseType{"s"});
  CHECK(s.links == 2);
  CHECK(s.harmony == 3.0);  // 2*1 + 1
  CHECK(s.sentence_reached);
  CHECK(s.reduced_symbols_ratio == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("an unreduced residual forfeits only the bonus") {
  const Reduction r =
      max_reduction(parse_type("n n^r s n^l n^r n n^ll s^l n n^r s n^l"));
  const GradedScore s = grade(r, kDefault, BaseType{"s"});
  CHECK(s.links == 4);
  CHECK(s.harmony == 4.0);
  CHECK_FALSE(s.sentence_reached);
  CHECK(s.reduced_symbols_ratio == doctest::Approx(8.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("the empty sentence scores zero with ratio one") {
  const GradedScore s = grade(max_reduction(PregroupType::unit()), kDefault, BaseType{"s"});
  CHECK(s.links == 0);
  CHECK(s.harmony == 0.0);
  CHECK_FALSE(s.sentence_reached);
  CHECK(s.reduced_symbols_ratio == 1.0);
}

TEST_CASE("grade_best_assignment reproduces the worked sentences") {
  const std::vector<std::string> svo = {"Priscilla", "eats", "bananas"};
  const BestAssignment best = grade_best_assignment(svo, svo_lexicon(), kDefault);
  CHECK(best.score.harmony == 3.0);
  CHECK(best.score.sentence_reached);

  const std::vector<std::string> rel = {"John", "is", "who", "Mary", "loves"};
  const BestAssignment rbest = grade_best_assignment(rel, relative_lexicon(), kDefault);
  CHECK(rbest.score.harmony == 4.0);
  CHECK_FALSE(rbest.score.sentence_reached);

  const std::vector<std::string> one = {"John"};
  const BestAssignment obest = grade_best_assignment(one, relative_lexicon(), kDefault);
  CHECK(obest.score.harmony == 0.0);
  CHECK(obest.score.links == 0);
}

TEST_CASE("the best assignment wins over every candidate") {
  Lexicon lex;
  lex.add("John", parse_type("n"));
  lex.add("saw", parse_type("n^r s n^l"));  // transitive first
  lex.add("saw", parse_type("n^r s"));
  const std::vector<std::string> words = {"John", "saw"};

  const AssignmentSet cands = assign_types(words, lex);
  REQUIRE(cands.candidates.size() == 2);
  const BestAssignment best = grade_best_assignment(words, lex, kDefault);
  for (const TypeAssignment& cand : cands.candidates) {
    const GradedScore s = grade(max_reduction(cand.concatenated), kDefault, BaseType{"s"});
    CHECK(best.score.harmony >= s.harmony);
  }
  // intransitive reading reaches s: 1 link + bonus beats 1 link alone
  CHECK(best.score.harmony == 2.0);
  CHECK(best.assignment.entry_indices == std::vector<std::size_t>{0, 1});
}

TEST_CASE("equal-harmony candidates resolve to the earliest entry") {
  Lexicon lex;
  lex.add("it", parse_type("n"));
  lex.add("it", parse_type("x"));  // same harmony (0) for the lone word
  const std::vector<std::string> words = {"it"};
  const BestAssignment best = grade_best_assignment(words, lex, kDefault);
  CHECK(best.assignment.entry_indices == std::vector<std::size_t>{0});
  CHECK(best.assignment.concatenated == parse_type("n"));
}

TEST_CASE("harmony of a grammatical sentence follows the closed form") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> w_d(0.1, 3.0);
  const Reduction r = max_reduction(parse_type("n n^r s n^l n"));
  for (int c = 0; c < 50; ++c) {
    const GradingWeights w{w_d(rng), w_d(rng)};
    const GradedScore s = grade(r, w, BaseType{"s"});
    const double expect =
        w.per_reduction * static_cast<double>((r.types.size() - 1) / 2) + w.sentence_bonus;
    CHECK(s.harmony == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("harmony is monotone in each weight and scales linearly") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> w_d(0.0, 2.0);
  for (int c = 0; c < 100; ++c) {
    const PregroupType t = selftest::random_type_string(rng, 10);
    const Reduction r = max_reduction(t);
    const GradingWeights w{w_d(rng), w_d(rng)};
    const GradedScore base = grade(r, w, BaseType{"s"});

    const GradedScore more_eps = grade(r, {w.per_reduction + 0.5, w.sentence_bonus},
                                       BaseType{"s"});
    const GradedScore more_s = grade(r, {w.per_reduction, w.sentence_bonus + 0.5},
                                     BaseType{"s"});
    CHECK(more_eps.harmony >= base.harmony);
    CHECK(more_s.harmony >= base.harmony);

    const double c_scale = 1.0 + w_d(rng);
    const GradedScore scaled = grade(r, {c_scale * w.per_reduction, c_scale * w.sentence_bonus},
                                     BaseType{"s"});
    CHECK(scaled.harmony ==
          doctest::Approx(c_scale * base.harmony).epsilon(1e-12));
  }
}

TEST_CASE("positive weight scaling never changes the chosen assignment") {
  Lexicon lex;
  lex.add("fish", parse_type("n"));
  lex.add("fish", parse_type("n^r s"));
  lex.add("fish", parse_type("n n^l"));
  const std::vector<std::string> words = {"fish", "fish"};
  for (double c : {0.25, 1.0, 3.0, 17.5}) {
    const BestAssignment a = grade_best_assignment(words, lex, {1.0, 1.0});
    const BestAssignment b = grade_best_assignment(words, lex, {c, c});
    CHECK(a.assignment.entry_indices == b.assignment.entry_indices);
    CHECK(b.score.harmony == doctest::Approx(c * a.score.harmony).epsilon(1e-12));
  }
}

TEST_CASE("unknown words propagate from assignment enumeration") {
  const std::vector<std::string> words = {"Priscilla", "slurps"};
  CHECK_THROWS_AS(grade_best_assignment(words, svo_lexicon(), kDefault), UnknownWordError);
}
