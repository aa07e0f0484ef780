#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "harmonium/structure.hpp"

namespace harmonium {

enum class RuleKind { Production, Root };

/// A weighted grammar rule anchored at a tree position. Production rules
/// A -> B C read the parent at the anchor and the children one level below;
/// root rules read a single filler at the root.
struct HarmonicRule {
  RuleKind kind = RuleKind::Production;
  std::string parent;
  std::string left;
  std::string right;
  TreePath anchor;
  double weight = 1.0;

  static HarmonicRule production(std::string parent, std::string left,
                                 std::string right, TreePath anchor = {},
                                 double weight = 1.0) {
    return HarmonicRule{RuleKind::Production, std::move(parent), std::move(left),
                        std::move(right), std::move(anchor), weight};
  }
  static HarmonicRule root(std::string parent, double weight = 1.0) {
    return HarmonicRule{RuleKind::Root, std::move(parent), "", "", {}, weight};
  }
};

/// A weighted rule set realized as the symmetric matrix W = sum_i w_i W_i.
/// Rules are kept sparse; the dense matrix materializes on demand because
/// blocks grow as arity^depth. Per rule instance, with u, v, w the dense
/// bindings of parent and children:
///   root:        W_i = u u^T
///   production:  W_i = (u v^T + v u^T)/4 + (u w^T + w u^T)/4
/// so a one-hot structure scores 1 for a full match and 1/2 per matched
/// parent-child pair.
class GrammarMatrix {
 public:
  GrammarMatrix() = default;
  GrammarMatrix(std::vector<HarmonicRule> rules, Spaces spaces)
      : rules_(std::move(rules)), spaces_(std::move(spaces)) {
    for (const HarmonicRule& r : rules_) validate(r);
  }

  const std::vector<HarmonicRule>& rules() const { return rules_; }
  const Spaces& spaces() const { return spaces_; }

  /// Deepest block any rule touches, -1 when empty.
  int max_depth() const {
    int d = -1;
    for (const HarmonicRule& r : rules_) {
      const int anchor_depth = static_cast<int>(r.anchor.size());
      d = std::max(d, r.kind == RuleKind::Production ? anchor_depth + 1 : anchor_depth);
    }
    return d;
  }

  /// Dense s^T W s cross-check path: W over stacked depth blocks 0..max_depth,
  /// constructed symmetric term by term.
  Eigen::MatrixXd dense(int max_depth) const {
    const auto off = detail::block_offsets(spaces_, max_depth);
    const auto dim = static_cast<Eigen::Index>(off.back());
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(dim, dim);
    for (const HarmonicRule& r : rules_) {
      Eigen::VectorXd u = one_hot(r.parent, r.anchor, off, dim);
      if (r.kind == RuleKind::Root) {
        W += r.weight * (u * u.transpose());
      } else {
        TreePath lp = r.anchor, rp = r.anchor;
        lp.push_back(0);
        rp.push_back(1);
        Eigen::VectorXd v = one_hot(r.left, lp, off, dim);
        Eigen::VectorXd w = one_hot(r.right, rp, off, dim);
        W += r.weight * 0.25 * (u * v.transpose() + v * u.transpose());
        W += r.weight * 0.25 * (u * w.transpose() + w * u.transpose());
      }
    }
    return W;
  }

 private:
  void validate(const HarmonicRule& r) const {
    spaces_.fillers.index_of(r.parent);
    if (r.kind == RuleKind::Production) {
      spaces_.fillers.index_of(r.left);
      spaces_.fillers.index_of(r.right);
      TreePath child = r.anchor;
      child.push_back(0);
      spaces_.roles.check(child);  // children must fit within depth_max
    } else {
      if (!r.anchor.empty())
        throw SpaceMismatchError("root rules are anchored at the root");
      spaces_.roles.check(r.anchor);
    }
  }

  Eigen::VectorXd one_hot(const std::string& filler, const TreePath& p,
                          const std::vector<std::size_t>& off, Eigen::Index dim) const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    u[static_cast<Eigen::Index>(detail::stacked_index(
        spaces_, off, spaces_.fillers.index_of(filler), p))] = 1.0;
    return u;
  }

  std::vector<HarmonicRule> rules_;
  Spaces spaces_;
};

/// Single-rule contribution W_i (unit weight applied via the rule itself).
inline GrammarMatrix rule_matrix(const HarmonicRule& rule, const Spaces& spaces) {
  return GrammarMatrix({rule}, spaces);
}

inline GrammarMatrix grammar_matrix(std::vector<HarmonicRule> rules, const Spaces& spaces) {
  return GrammarMatrix(std::move(rules), spaces);
}

/// Contribution of one anchored rule to the quadratic form, evaluated from
/// the sparse coefficients: bindings are orthonormal, so s^T u = the bound
/// coefficient of (filler, path).
inline double rule_harmony(const StructureVector& s, const HarmonicRule& r) {
  const auto coeff = [&](const std::string& f, const TreePath& p) {
    return s.coefficient(f, p);
  };
  if (r.kind == RuleKind::Root) {
    const double c = coeff(r.parent, r.anchor);
    return r.weight * c * c;
  }
  TreePath lp = r.anchor, rp = r.anchor;
  lp.push_back(0);
  rp.push_back(1);
  return r.weight * 0.5 * coeff(r.parent, r.anchor) *
         (coeff(r.left, lp) + coeff(r.right, rp));
}

/// H(s) = s^T W s, evaluated sparsely as the sum of per-rule contributions.
inline double harmony(const StructureVector& s, const GrammarMatrix& g) {
  if (!(s.spaces() == g.spaces()))
    throw SpaceMismatchError("harmony over different spaces");
  double h = 0.0;
  for (const HarmonicRule& r : g.rules()) h += rule_harmony(s, r);
  return h;
}

/// Dense cross-check of harmony via the materialized quadratic form.
inline double dense_harmony(const StructureVector& s, const GrammarMatrix& g) {
  if (!(s.spaces() == g.spaces()))
    throw SpaceMismatchError("harmony over different spaces");
  const int depth = std::max(s.max_depth(), g.max_depth());
  if (depth < 0) return 0.0;
  const Eigen::VectorXd v = dense_stacked(s, depth);
  return v.dot(g.dense(depth) * v);
}

/// Anchored copies of a template so recursive embeddings are counted at
/// every tree position: productions at every path with |path| < depth_max,
/// root rules at the root only.
inline std::vector<HarmonicRule> instantiate_rule_at_all_anchors(
    const HarmonicRule& tmpl, const RoleSpace& roles) {
  std::vector<HarmonicRule> out;
  if (tmpl.kind == RuleKind::Root) {
    HarmonicRule r = tmpl;
    r.anchor = {};
    out.push_back(std::move(r));
    return out;
  }
  // breadth-first over paths of length < depth_max (children stay in range)
  std::vector<TreePath> frontier;
  if (roles.depth_max() > 0) frontier.push_back({});
  while (!frontier.empty()) {
    std::vector<TreePath> next;
    for (TreePath& p : frontier) {
      HarmonicRule r = tmpl;
      r.anchor = p;
      out.push_back(std::move(r));
      if (static_cast<int>(p.size()) + 1 < roles.depth_max()) {
        for (int c = 0; c < roles.arity(); ++c) {
          TreePath q = p;
          q.push_back(c);
          next.push_back(std::move(q));
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

// ============================================================================
// Grammar files: `rule <w> <A> -> <B> <C>` and `root <w> <A>` templates
// ============================================================================

inline std::vector<HarmonicRule> parse_grammar(std::istream& in) {
  std::vector<HarmonicRule> rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    const auto fail = [&](const std::string& why) {
      throw SyntaxError("grammar line " + std::to_string(lineno) + ": " + why);
    };
    if (kind == "rule") {
      double w;
      std::string a, arrow, b, c;
      if (!(ls >> w >> a >> arrow >> b >> c) || arrow != "->")
        fail("expected `rule <w> <A> -> <B> <C>`");
      rules.push_back(HarmonicRule::production(a, b, c, {}, w));
    } else if (kind == "root") {
      double w;
      std::string a;
      if (!(ls >> w >> a)) fail("expected `root <w> <A>`");
      rules.push_back(HarmonicRule::root(a, w));
    } else {
      fail("unknown rule kind '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens");
  }
  return rules;
}

inline std::vector<HarmonicRule> load_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SyntaxError("cannot open grammar file: " + path);
  return parse_grammar(in);
}

}  // namespace harmonium
