#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "harmonium/pregroup.hpp"

namespace harmonium {

/// A cancellation link between positions i < j of a type string. Valid links
/// satisfy cancels(simples[i], simples[j]) and have a fully matched interior,
/// so the pair is adjacent after inner reductions.
struct Link {
  std::size_t i = 0;
  std::size_t j = 0;

  auto operator<=>(const Link&) const = default;
};

/// A set of pairwise non-crossing links over a type string plus the residual
/// (unmatched) type. Links are kept sorted by (i, j).
struct Reduction {
  PregroupType types;
  std::vector<Link> links;
  PregroupType residual;
};

namespace detail {

inline PregroupType residual_of(const PregroupType& types,
                                const std::vector<Link>& links) {
  std::vector<bool> matched(types.size(), false);
  for (const Link& l : links) matched[l.i] = matched[l.j] = true;
  PregroupType res;
  for (std::size_t p = 0; p < types.size(); ++p)
    if (!matched[p]) res.simples.push_back(types[p]);
  return res;
}

using LinkSet = std::vector<Link>;  // sorted by (i, j)

// Exhaustive enumerator behind brute_force_reduction. Spans decompose at
// their leftmost position: unmatched, or linked to some k with the interior
// [i+1, k-1] fully matched. Each valid set is produced exactly once, sorted
// by construction.
class LinkSetEnumerator {
 public:
  explicit LinkSetEnumerator(const PregroupType& t) : t_(t) {}

  const std::vector<LinkSet>& all_partial(std::size_t i, std::size_t j_excl) {
    const auto key = std::make_pair(i, j_excl);
    auto it = partial_memo_.find(key);
    if (it != partial_memo_.end()) return it->second;
    std::vector<LinkSet> out;
    if (i >= j_excl) {
      out.push_back(LinkSet{});
    } else {
      for (const LinkSet& rest : all_partial(i + 1, j_excl))
        out.push_back(rest);  // i unmatched
      for (std::size_t k = i + 1; k < j_excl; ++k) {
        if (!cancels(t_[i], t_[k])) continue;
        const auto& inner = all_full(i + 1, k);
        if (inner.empty()) continue;
        const auto& rights = all_partial(k + 1, j_excl);
        for (const LinkSet& f : inner)
          for (const LinkSet& r : rights) {
            LinkSet s;
            s.reserve(1 + f.size() + r.size());
            s.push_back(Link{i, k});
            s.insert(s.end(), f.begin(), f.end());
            s.insert(s.end(), r.begin(), r.end());
            out.push_back(std::move(s));
          }
      }
    }
    return partial_memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const std::vector<LinkSet>& all_full(std::size_t i, std::size_t j_excl) {
    const auto key = std::make_pair(i, j_excl);
    auto it = full_memo_.find(key);
    if (it != full_memo_.end()) return it->second;
    std::vector<LinkSet> out;
    if (i >= j_excl) {
      out.push_back(LinkSet{});
    } else if ((j_excl - i) % 2 == 0) {
      for (std::size_t k = i + 1; k < j_excl; k += 2) {
        if (!cancels(t_[i], t_[k])) continue;
        for (const LinkSet& f : all_full(i + 1, k))
          for (const LinkSet& r : all_full(k + 1, j_excl)) {
            LinkSet s;
            s.reserve(1 + f.size() + r.size());
            s.push_back(Link{i, k});
            s.insert(s.end(), f.begin(), f.end());
            s.insert(s.end(), r.begin(), r.end());
            out.push_back(std::move(s));
          }
      }
    }
    return full_memo_.emplace(key, std::move(out)).first->second;
  }

  const PregroupType& t_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<LinkSet>> full_memo_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<LinkSet>> partial_memo_;
};

}  // namespace detail

/// Test oracle for max_reduction: exhaustively enumerates every valid nested
/// non-crossing link set and returns a maximum-cardinality one, breaking ties
/// toward the lexicographically smallest set ordered by (i, j). Guarded to
/// |types| <= 16 against exponential blowup.
inline Reduction brute_force_reduction(const PregroupType& types) {
  if (types.size() > 16)
    throw InputTooLongError("brute_force_reduction limited to 16 simple types, got " +
                            std::to_string(types.size()));
  detail::LinkSetEnumerator en(types);
  const auto& sets = en.all_partial(0, types.size());
  const detail::LinkSet* best = &sets.front();
  for (const detail::LinkSet& s : sets) {
    if (s.size() > best->size() ||
        (s.size() == best->size() &&
         std::lexicographical_compare(s.begin(), s.end(), best->begin(), best->end())))
      best = &s;
  }
  Reduction r{types, *best, {}};
  r.residual = detail::residual_of(types, r.links);
  return r;
}

/// Maximum partial reduction by interval dynamic programming, O(n^3) time and
/// O(n^2) space. full[i][j] marks spans reducible to the unit; best[i][j] is
/// the maximum link count of a span:
///   best[i][j] = max( best[i+1][j],
///                     max over k with cancels(t[i], t[k]) and full interior
///                         of (k - i + 1)/2 + best[k+1][j] ).
/// Ties among maximum-cardinality reductions break toward the
/// lexicographically smallest link set: matching the leftmost position to its
/// smallest optimal partner is lex-minimal because a link starting at i
/// precedes every link set whose first link starts later.
inline Reduction max_reduction(const PregroupType& types) {
  const std::size_t n = types.size();
  Reduction r{types, {}, {}};
  if (n == 0) return r;

  // full_[i][j] / best_[i][j] over inclusive spans, helpers for empty spans
  std::vector<std::vector<bool>> full(n, std::vector<bool>(n, false));
  std::vector<std::vector<std::size_t>> best(n, std::vector<std::size_t>(n, 0));
  auto full_at = [&](std::size_t i, std::size_t j_incl) {
    return i > j_incl || (j_incl < n && full[i][j_incl]);
  };
  auto best_at = [&](std::size_t i, std::size_t j_incl) -> std::size_t {
    return i > j_incl ? 0 : best[i][j_incl];
  };

  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len - 1;
      if (len % 2 == 0) {
        for (std::size_t k = i + 1; k <= j; k += 2) {
          if (cancels(types[i], types[k]) && full_at(i + 1, k - 1) &&
              full_at(k + 1, j)) {
            full[i][j] = true;
            break;
          }
        }
      }
      std::size_t b = best_at(i + 1, j);
      for (std::size_t k = i + 1; k <= j; ++k) {
        if (cancels(types[i], types[k]) && full_at(i + 1, k - 1))
          b = std::max(b, (k - i + 1) / 2 + best_at(k + 1, j));
      }
      best[i][j] = b;
    }
  }

  // Reconstruction. fullrec links a fully reduced span, rec a general one;
  // both take the smallest viable partner first.
  auto fullrec = [&](auto&& self, std::size_t i, std::size_t j_incl) -> void {
    if (i > j_incl) return;
    for (std::size_t k = i + 1; k <= j_incl; k += 2) {
      if (cancels(types[i], types[k]) && full_at(i + 1, k - 1) &&
          full_at(k + 1, j_incl)) {
        r.links.push_back(Link{i, k});
        self(self, i + 1, k - 1);
        self(self, k + 1, j_incl);
        return;
      }
    }
  };
  auto rec = [&](auto&& self, std::size_t i, std::size_t j_incl) -> void {
    while (i <= j_incl && j_incl < n) {
      const std::size_t target = best_at(i, j_incl);
      if (target == 0) return;
      bool linked = false;
      for (std::size_t k = i + 1; k <= j_incl; ++k) {
        if (cancels(types[i], types[k]) && full_at(i + 1, k - 1) &&
            (k - i + 1) / 2 + best_at(k + 1, j_incl) == target) {
          r.links.push_back(Link{i, k});
          fullrec(fullrec, i + 1, k - 1);
          i = k + 1;
          linked = true;
          break;
        }
      }
      if (!linked) ++i;  // leftmost position stays unmatched
    }
  };
  rec(rec, 0, n - 1);

  std::sort(r.links.begin(), r.links.end());
  r.residual = detail::residual_of(types, r.links);
  return r;
}

/// True iff the residual is exactly the single plain sentence type.
inline bool is_grammatical(const Reduction& r, const BaseType& sentence_base) {
  return r.residual.size() == 1 && r.residual[0] == SimpleType{sentence_base, 0};
}

/// Direct-scan validity check of the Link invariants: cancellation on every
/// link, pairwise non-crossing, fully matched interiors, and a residual that
/// is the unmatched simples in original order.
inline bool valid_reduction(const Reduction& r) {
  const std::size_t n = r.types.size();
  std::vector<std::size_t> partner(n, n);  // n = unmatched
  for (const Link& l : r.links) {
    if (l.i >= l.j || l.j >= n) return false;
    if (!cancels(r.types[l.i], r.types[l.j])) return false;
    if (partner[l.i] != n || partner[l.j] != n) return false;
    partner[l.i] = l.j;
    partner[l.j] = l.i;
  }
  for (const Link& a : r.links)
    for (const Link& b : r.links)
      if (a.i < b.i && b.i < a.j && a.j < b.j) return false;  // crossing
  for (const Link& l : r.links)
    for (std::size_t p = l.i + 1; p < l.j; ++p)
      if (partner[p] == n || partner[p] <= l.i || partner[p] >= l.j)
        return false;  // interior not fully matched inside (i, j)
  return r.residual == detail::residual_of(r.types, r.links);
}

/// Graphviz rendering of a reduction: one node per simple type in order,
/// arcs for links, residual nodes styled red.
inline std::string reduction_to_dot(const Reduction& r) {
  std::vector<bool> matched(r.types.size(), false);
  for (const Link& l : r.links) matched[l.i] = matched[l.j] = true;
  std::string out = "graph reduction {\n  rankdir=LR;\n  node [shape=plaintext];\n";
  for (std::size_t p = 0; p < r.types.size(); ++p) {
    out += "  t" + std::to_string(p) + " [label=\"" + render(r.types[p]) + "\"";
    if (!matched[p]) out += ", color=red, fontcolor=red";
    out += "];\n";
  }
  for (const Link& l : r.links)
    out += "  t" + std::to_string(l.i) + " -- t" + std::to_string(l.j) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace harmonium
