#pragma once

#include <span>
#include <string>
#include <vector>

#include "harmonium/lexicon.hpp"
#include "harmonium/reduce.hpp"

namespace harmonium {

/// Scoring weights: one point per cancellation link and one for reaching the
/// sentence type, by default.
struct GradingWeights {
  double per_reduction = 1.0;
  double sentence_bonus = 1.0;
};

struct GradedScore {
  std::size_t links = 0;
  double reduced_symbols_ratio = 1.0;  // 2*links / |types|, 1 for unit input
  bool sentence_reached = false;
  double harmony = 0.0;
};

/// harmony = per_reduction * links + sentence_bonus * [residual == s].
/// Expects a maximal reduction (the output of max_reduction).
inline GradedScore grade(const Reduction& r, const GradingWeights& w,
                         const BaseType& sentence_base) {
  GradedScore s;
  s.links = r.links.size();
  s.reduced_symbols_ratio =
      r.types.size() == 0
          ? 1.0
          : 2.0 * static_cast<double>(s.links) / static_cast<double>(r.types.size());
  s.sentence_reached = is_grammatical(r, sentence_base);
  s.harmony = w.per_reduction * static_cast<double>(s.links) +
              (s.sentence_reached ? w.sentence_bonus : 0.0);
  return s;
}

struct BestAssignment {
  TypeAssignment assignment;
  Reduction reduction;
  GradedScore score;
  bool truncated = false;  // candidate enumeration hit the ambiguity cap
};

/// Grades every type-assignment candidate and returns the maximum-harmony
/// one; ties break toward the earliest candidate in entry order.
inline BestAssignment grade_best_assignment(std::span<const std::string> words,
                                            const Lexicon& lex,
                                            const GradingWeights& w,
                                            std::size_t cap = 1024) {
  const AssignmentSet cands = assign_types(words, lex, cap);
  BestAssignment best;
  bool have = false;
  for (const TypeAssignment& cand : cands.candidates) {
    Reduction r = max_reduction(cand.concatenated);
    GradedScore s = grade(r, w, lex.sentence_base());
    if (!have || s.harmony > best.score.harmony) {
      best = BestAssignment{cand, std::move(r), s, cands.truncated};
      have = true;
    }
  }
  best.truncated = cands.truncated;
  return best;
}

}  // namespace harmonium
