#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "harmonium/compose.hpp"
#include "harmonium/grading.hpp"
#include "harmonium/harmonic.hpp"
#include "harmonium/structure.hpp"

// Randomized equivalence suites checking the fast paths against brute-force
// oracles. Shared by the `selftest` CLI command and the test binaries.

namespace harmonium::selftest {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failure descriptions

  bool ok() const { return failures == 0; }

  void fail(std::string msg) {
    ++failures;
    if (messages.size() < 8) messages.push_back(std::move(msg));
  }
};

using Rng = std::mt19937_64;

inline PregroupType random_type_string(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> bases = {"n", "s"};
  std::uniform_int_distribution<std::size_t> len_d(0, max_len);
  std::uniform_int_distribution<std::size_t> base_d(0, bases.size() - 1);
  std::uniform_int_distribution<int> deg_d(-2, 2);
  PregroupType t;
  const std::size_t len = len_d(rng);
  for (std::size_t k = 0; k < len; ++k)
    t.simples.push_back(SimpleType{BaseType{bases[base_d(rng)]}, deg_d(rng)});
  return t;
}

/// max_reduction vs exhaustive enumeration: equal link count, equal link set
/// under the shared tie-break, and valid links from both.
inline SuiteResult run_reducer_oracle(std::uint64_t seed, std::size_t cases,
                                      std::size_t max_len = 12) {
  SuiteResult res{"reducer-oracle"};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    ++res.cases;
    const PregroupType t = random_type_string(rng, max_len);
    const Reduction fast = max_reduction(t);
    const Reduction slow = brute_force_reduction(t);
    if (!valid_reduction(fast))
      res.fail("invalid max_reduction on: " + render(t));
    else if (!valid_reduction(slow))
      res.fail("invalid brute_force_reduction on: " + render(t));
    else if (fast.links.size() != slow.links.size())
      res.fail("link count mismatch on: " + render(t) + " (" +
               std::to_string(fast.links.size()) + " vs " +
               std::to_string(slow.links.size()) + ")");
    else if (fast.links != slow.links)
      res.fail("tie-break mismatch on: " + render(t));
  }
  return res;
}

inline TreePath random_path(Rng& rng, const RoleSpace& roles, int max_depth) {
  std::uniform_int_distribution<int> len_d(0, max_depth);
  std::uniform_int_distribution<int> step_d(0, roles.arity() - 1);
  TreePath p(static_cast<std::size_t>(len_d(rng)));
  for (int& step : p) step = step_d(rng);
  return p;
}

/// Unbinding exactness, norm accounting, and sparse/dense/closed-form harmony
/// agreement on random structures.
inline SuiteResult run_ics_exactness(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"ics-exactness"};
  Rng rng(seed);
  const Spaces spaces{FillerSpace({"S", "N", "V", "A", "B"}), RoleSpace(2, 4)};
  std::uniform_int_distribution<std::size_t> nbind_d(0, 10);
  std::uniform_int_distribution<std::size_t> filler_d(0, spaces.fillers.dim() - 1);
  std::uniform_real_distribution<double> coeff_d(-2.0, 2.0);
  std::uniform_int_distribution<int> small_d(0, 3);

  for (std::size_t c = 0; c < cases; ++c) {
    ++res.cases;
    bool bad = false;

    // distinct (filler, path) bindings with real coefficients
    std::map<StructureVector::Key, double> want;
    const std::size_t nbind = nbind_d(rng);
    while (want.size() < nbind) {
      StructureVector::Key key{filler_d(rng), random_path(rng, spaces.roles, 4)};
      double v = coeff_d(rng);
      if (v == 0.0) v = 1.0;
      want.emplace(std::move(key), v);
    }
    StructureVector s(spaces);
    double norm2 = 0.0;
    for (const auto& [key, v] : want) {
      s.add(key.first, key.second, v);
      norm2 += v * v;
    }
    for (const auto& [key, v] : want) {
      const Eigen::VectorXd f = unbind(s, key.second);
      for (Eigen::Index k = 0; k < f.size(); ++k) {
        const auto it = want.find({static_cast<std::size_t>(k), key.second});
        const double expect = it == want.end() ? 0.0 : it->second;
        if (f[k] != expect) {
          res.fail("unbind not exact (case " + std::to_string(c) + ")");
          bad = true;
          break;
        }
      }
      if (bad) break;
    }
    if (bad) continue;
    const double dense2 = dense_stacked(s, 4).squaredNorm();
    if (std::abs(dense2 - norm2) > 1e-12 * std::max(1.0, norm2)) {
      res.fail("norm mismatch (case " + std::to_string(c) + ")");
      continue;
    }

    // 0/1 structure + random rules: sparse == dense == per-instance closed form
    StructureVector s01(spaces);
    std::set<StructureVector::Key> present;
    const std::size_t n01 = nbind_d(rng);
    while (present.size() < n01) {
      StructureVector::Key key{filler_d(rng), random_path(rng, spaces.roles, 3)};
      if (present.insert(key).second) s01.add(key.first, key.second, 1.0);
    }
    std::vector<HarmonicRule> rules;
    const std::size_t nrules = 1 + nbind_d(rng) % 5;
    for (std::size_t k = 0; k < nrules; ++k) {
      const double w = coeff_d(rng);
      if (small_d(rng) == 0) {
        rules.push_back(HarmonicRule::root(spaces.fillers.symbol(filler_d(rng)), w));
      } else {
        rules.push_back(HarmonicRule::production(
            spaces.fillers.symbol(filler_d(rng)), spaces.fillers.symbol(filler_d(rng)),
            spaces.fillers.symbol(filler_d(rng)), random_path(rng, spaces.roles, 3), w));
      }
    }
    const GrammarMatrix g = grammar_matrix(rules, spaces);
    const double sparse = harmony(s01, g);
    const double dense = dense_harmony(s01, g);
    double closed = 0.0;
    const auto has = [&](const std::string& f, const TreePath& p) {
      return present.count({spaces.fillers.index_of(f), p}) ? 1.0 : 0.0;
    };
    for (const HarmonicRule& r : rules) {
      if (r.kind == RuleKind::Root) {
        closed += r.weight * has(r.parent, r.anchor);
      } else {
        TreePath lp = r.anchor, rp = r.anchor;
        lp.push_back(0);
        rp.push_back(1);
        if (has(r.parent, r.anchor) != 0.0)
          closed += r.weight * 0.5 * (has(r.left, lp) + has(r.right, rp));
      }
    }
    if (std::abs(sparse - dense) > 1e-12 * std::max(1.0, std::abs(dense)))
      res.fail("sparse vs dense harmony mismatch (case " + std::to_string(c) + ")");
    else if (std::abs(sparse - closed) > 1e-12 * std::max(1.0, std::abs(closed)))
      res.fail("sparse vs closed-form harmony mismatch (case " + std::to_string(c) + ")");
  }
  return res;
}

// ----------------------------------------------------------------------------
// Independent composition oracle: materialize the full tensor product of all
// words with plain loops, then contract linked axis pairs by explicit
// summation. No shared code with compose().
// ----------------------------------------------------------------------------

namespace oracle {

struct Dense {
  std::vector<double> data{1.0};
  std::vector<Eigen::Index> shape;
  std::vector<std::size_t> axis_ids;
};

inline std::vector<Eigen::Index> row_major_strides(const std::vector<Eigen::Index>& shape) {
  std::vector<Eigen::Index> s(shape.size(), 1);
  for (std::size_t k = shape.size(); k-- > 1;) s[k - 1] = s[k] * shape[k];
  return s;
}

inline Dense product(const Dense& a, const Dense& b) {
  Dense out;
  out.data.assign(a.data.size() * b.data.size(), 0.0);
  out.shape = a.shape;
  out.shape.insert(out.shape.end(), b.shape.begin(), b.shape.end());
  out.axis_ids = a.axis_ids;
  out.axis_ids.insert(out.axis_ids.end(), b.axis_ids.begin(), b.axis_ids.end());
  for (std::size_t x = 0; x < a.data.size(); ++x)
    for (std::size_t y = 0; y < b.data.size(); ++y)
      out.data[x * b.data.size() + y] = a.data[x] * b.data[y];
  return out;
}

inline Dense contract_pair(const Dense& t, std::size_t gi, std::size_t gj) {
  std::size_t p = 0, q = 0;
  for (std::size_t k = 0; k < t.axis_ids.size(); ++k) {
    if (t.axis_ids[k] == gi) p = k;
    if (t.axis_ids[k] == gj) q = k;
  }
  Dense out;
  out.data.clear();
  out.shape.clear();
  for (std::size_t k = 0; k < t.shape.size(); ++k) {
    if (k == p || k == q) continue;
    out.shape.push_back(t.shape[k]);
    out.axis_ids.push_back(t.axis_ids[k]);
  }
  const auto in_strides = row_major_strides(t.shape);
  const Eigen::Index out_size =
      std::accumulate(out.shape.begin(), out.shape.end(), Eigen::Index{1},
                      std::multiplies<>());
  out.data.assign(static_cast<std::size_t>(out_size), 0.0);
  const Eigen::Index d = t.shape[p];

  std::vector<Eigen::Index> idx(out.shape.size(), 0);
  for (Eigen::Index flat = 0; flat < out_size; ++flat) {
    // rebuild the source offset from the surviving indices
    Eigen::Index base = 0;
    std::size_t which = 0;
    for (std::size_t k = 0; k < t.shape.size(); ++k) {
      if (k == p || k == q) continue;
      base += idx[which++] * in_strides[k];
    }
    double acc = 0.0;
    for (Eigen::Index k = 0; k < d; ++k)
      acc += t.data[static_cast<std::size_t>(base + k * in_strides[p] + k * in_strides[q])];
    out.data[static_cast<std::size_t>(flat)] = acc;
    for (std::size_t k = out.shape.size(); k-- > 0;) {
      if (++idx[k] < out.shape[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

/// Full-product-then-contract reference implementation of compose.
inline Dense compose_reference(std::span<const WordTensor> words, const Reduction& r) {
  Dense full;
  std::size_t next_axis = 0;
  for (const WordTensor& w : words) {
    Dense d;
    d.data.assign(w.data.data().data(), w.data.data().data() + w.data.size());
    d.shape = w.data.shape();
    for (std::size_t k = 0; k < w.type.size(); ++k) d.axis_ids.push_back(next_axis++);
    full = product(full, d);
  }
  for (const Link& l : r.links) full = contract_pair(full, l.i, l.j);
  return full;
}

}  // namespace oracle

inline double rel_diff(std::span<const double> a, std::span<const double> b) {
  double scale = 1.0, diff = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < a.size(); ++k)
    diff = std::max(diff, std::abs(a[k] - b[k]));
  return diff / scale;
}

/// compose vs the materialize-everything oracle, plus contraction-order
/// invariance, on seeded random sentences.
inline SuiteResult run_compose_oracle(std::uint64_t seed, std::size_t cases,
                                      std::size_t max_len = 12,
                                      Eigen::Index max_dim = 3) {
  SuiteResult res{"compose-oracle"};
  Rng rng(seed);
  std::uniform_int_distribution<Eigen::Index> dim_d(1, max_dim);
  std::uniform_real_distribution<double> val_d(-1.0, 1.0);

  for (std::size_t c = 0; c < cases; ++c) {
    ++res.cases;
    const PregroupType t = random_type_string(rng, max_len);
    const Reduction r = max_reduction(t);

    TypeSpaceMap spaces;
    for (const SimpleType& st : t.simples)
      if (!spaces.dims.count(st.base.name)) spaces.require(st.base, dim_d(rng));

    // random segmentation of the type string into words
    std::vector<WordTensor> words;
    std::size_t pos = 0;
    std::uniform_int_distribution<std::size_t> seg_d(1, 3);
    while (pos < t.size()) {
      const std::size_t len = std::min(seg_d(rng), t.size() - pos);
      WordTensor w;
      w.word = "w" + std::to_string(words.size());
      w.type.simples.assign(t.simples.begin() + static_cast<std::ptrdiff_t>(pos),
                            t.simples.begin() + static_cast<std::ptrdiff_t>(pos + len));
      Tensor::Shape shape;
      for (const SimpleType& st : w.type.simples)
        shape.push_back(spaces.dim_of(st.base));
      w.data = Tensor(shape);
      for (Eigen::Index k = 0; k < w.data.size(); ++k) w.data[k] = val_d(rng);
      words.push_back(std::move(w));
      pos += len;
    }

    const WordTensor got = compose(words, r, spaces);
    const auto want = oracle::compose_reference(words, r);
    if (got.data.rank() != r.residual.size()) {
      res.fail("residual rank mismatch on: " + render(t));
      continue;
    }
    const std::span<const double> got_span(got.data.data().data(),
                                           static_cast<std::size_t>(got.data.size()));
    if (rel_diff(got_span, want.data) > 1e-10) {
      res.fail("oracle mismatch on: " + render(t));
      continue;
    }

    // any schedule must agree with the default one
    std::vector<std::size_t> order(r.links.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const WordTensor again = compose_ordered(words, r, spaces, order);
    const std::span<const double> again_span(again.data.data().data(),
                                             static_cast<std::size_t>(again.data.size()));
    if (rel_diff(again_span, got_span) > 1e-10)
      res.fail("contraction order changed the result on: " + render(t));
  }
  return res;
}

}  // namespace harmonium::selftest
