#pragma once

#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmonium/compose.hpp"
#include "harmonium/grading.hpp"
#include "harmonium/harmonic.hpp"

namespace harmonium {

using Json = nlohmann::ordered_json;

/// Rounds through "%.12g" so emitted floats carry 12 significant digits and
/// identical inputs always serialize to identical bytes.
inline double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline Json links_json(const std::vector<Link>& links) {
  Json out = Json::array();
  for (const Link& l : links) out.push_back({l.i, l.j});
  return out;
}

/// Per-sentence record:
/// {words, chosen_types, links, residual, harmony, grammatical, ratio}.
/// The residual is rendered type notation; "" is the unit type.
inline Json score_record(std::span<const std::string> words, const BestAssignment& best) {
  Json rec;
  rec["words"] = std::vector<std::string>(words.begin(), words.end());
  Json types = Json::array();
  for (const PregroupType& t : best.assignment.word_types) types.push_back(render(t));
  rec["chosen_types"] = std::move(types);
  rec["links"] = links_json(best.reduction.links);
  rec["residual"] = render(best.reduction.residual);
  rec["harmony"] = round12(best.score.harmony);
  rec["grammatical"] = best.score.sentence_reached;
  rec["ratio"] = round12(best.score.reduced_symbols_ratio);
  return rec;
}

inline Json reduce_record(std::span<const std::string> words, const BestAssignment& best) {
  Json rec;
  rec["words"] = std::vector<std::string>(words.begin(), words.end());
  Json types = Json::array();
  for (const PregroupType& t : best.assignment.word_types) types.push_back(render(t));
  rec["chosen_types"] = std::move(types);
  rec["links"] = links_json(best.reduction.links);
  rec["residual"] = render(best.reduction.residual);
  return rec;
}

inline Json compose_record(std::span<const std::string> words, const WordTensor& result) {
  Json rec;
  rec["words"] = std::vector<std::string>(words.begin(), words.end());
  rec["residual"] = render(result.type);
  rec["shape"] = result.data.shape();
  Json values = Json::array();
  for (Eigen::Index k = 0; k < result.data.size(); ++k)
    values.push_back(round12(result.data[k]));
  rec["values"] = std::move(values);
  return rec;
}

inline Json harmony_record(const StructureVector& s, const GrammarMatrix& g) {
  Json rec;
  rec["harmony"] = round12(harmony(s, g));
  Json contribs = Json::array();
  for (const HarmonicRule& r : g.rules()) {
    const double h = rule_harmony(s, r);
    if (h == 0.0) continue;
    Json item;
    if (r.kind == RuleKind::Root) {
      item["rule"] = "root " + r.parent;
    } else {
      item["rule"] = r.parent + " -> " + r.left + " " + r.right;
    }
    item["anchor"] = r.anchor;
    item["weight"] = round12(r.weight);
    item["value"] = round12(h);
    contribs.push_back(std::move(item));
  }
  rec["contributions"] = std::move(contribs);
  return rec;
}

/// Paper-style inline notation: `n n^r s n^l n ≤ s` (unit rendered as 1).
inline std::string reduction_text(const Reduction& r) {
  const std::string lhs = r.types.is_unit() ? "1" : render(r.types);
  const std::string rhs = r.residual.is_unit() ? "1" : render(r.residual);
  return lhs + " ≤ " + rhs;
}

}  // namespace harmonium
