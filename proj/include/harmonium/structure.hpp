#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "harmonium/errors.hpp"

namespace harmonium {

/// Filler symbols with a one-hot orthonormal basis in appearance order.
class FillerSpace {
 public:
  FillerSpace() = default;
  explicit FillerSpace(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t k = 0; k < symbols_.size(); ++k)
      if (!index_.emplace(symbols_[k], k).second)
        throw Error("duplicate filler symbol: " + symbols_[k]);
  }

  std::size_t dim() const { return symbols_.size(); }
  bool contains(const std::string& sym) const { return index_.count(sym) > 0; }

  std::size_t index_of(const std::string& sym) const {
    auto it = index_.find(sym);
    if (it == index_.end()) throw UnknownFillerError(sym);
    return it->second;
  }

  const std::string& symbol(std::size_t k) const { return symbols_[k]; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const FillerSpace& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A child index sequence addressing a tree position; empty = root.
using TreePath = std::vector<int>;

/// Tensor-power role space: the role vector of a path of length d is the
/// Kronecker product of d one-hot child-index vectors, so roles of distinct
/// paths are orthonormal and the depth-d block has dimension arity^d.
class RoleSpace {
 public:
  RoleSpace() = default;
  RoleSpace(int arity, int depth_max) : arity_(arity), depth_max_(depth_max) {}

  int arity() const { return arity_; }
  int depth_max() const { return depth_max_; }

  std::size_t dim(int depth) const {
    std::size_t d = 1;
    for (int k = 0; k < depth; ++k) d *= static_cast<std::size_t>(arity_);
    return d;
  }

  /// Index of a path within its depth block (first step most significant).
  std::size_t path_index(const TreePath& p) const {
    check(p);
    std::size_t idx = 0;
    for (int step : p) idx = idx * static_cast<std::size_t>(arity_) + static_cast<std::size_t>(step);
    return idx;
  }

  void check(const TreePath& p) const {
    if (static_cast<int>(p.size()) > depth_max_)
      throw DepthExceededError("path depth " + std::to_string(p.size()) +
                               " exceeds depth_max " + std::to_string(depth_max_));
    for (int step : p)
      if (step < 0 || step >= arity_)
        throw SpaceMismatchError("child index " + std::to_string(step) +
                                 " outside arity " + std::to_string(arity_));
  }

  bool operator==(const RoleSpace& o) const {
    return arity_ == o.arity_ && depth_max_ == o.depth_max_;
  }

 private:
  int arity_ = 2;
  int depth_max_ = 8;
};

struct Spaces {
  FillerSpace fillers;
  RoleSpace roles;

  bool operator==(const Spaces& o) const {
    return fillers == o.fillers && roles == o.roles;
  }
};

/// A sparse sum of filler (x) role bindings over the depth-graded direct sum
/// of F (x) R^{(x)d} blocks. Zero coefficients are never stored.
class StructureVector {
 public:
  using Key = std::pair<std::size_t, TreePath>;  // (filler index, path)

  StructureVector() = default;
  explicit StructureVector(Spaces spaces) : spaces_(std::move(spaces)) {}

  const Spaces& spaces() const { return spaces_; }
  const std::map<Key, double>& bindings() const { return coeffs_; }
  std::size_t binding_count() const { return coeffs_.size(); }

  double coefficient(const std::string& filler, const TreePath& p) const {
    auto it = coeffs_.find(Key{spaces_.fillers.index_of(filler), p});
    return it == coeffs_.end() ? 0.0 : it->second;
  }

  void add(std::size_t filler_index, const TreePath& p, double c) {
    spaces_.roles.check(p);
    if (filler_index >= spaces_.fillers.dim())
      throw UnknownFillerError("#" + std::to_string(filler_index));
    auto [it, fresh] = coeffs_.emplace(Key{filler_index, p}, c);
    if (!fresh) it->second += c;
    if (it->second == 0.0) coeffs_.erase(it);
  }

  /// Deepest binding path, -1 when empty.
  int max_depth() const {
    int d = -1;
    for (const auto& [key, c] : coeffs_)
      d = std::max(d, static_cast<int>(key.second.size()));
    return d;
  }

 private:
  Spaces spaces_;
  std::map<Key, double> coeffs_;
};

/// One-entry structure with coefficient 1: the Kronecker product of the
/// one-hot filler vector and the one-hot role-path vector.
inline StructureVector bind(const std::string& filler, const TreePath& p,
                            const Spaces& spaces) {
  StructureVector s(spaces);
  s.add(spaces.fillers.index_of(filler), p, 1.0);
  return s;
}

inline StructureVector sum(const StructureVector& a, const StructureVector& b) {
  if (!(a.spaces() == b.spaces()))
    throw SpaceMismatchError("summing structures over different spaces");
  StructureVector out = a;
  for (const auto& [key, c] : b.bindings()) out.add(key.first, key.second, c);
  return out;
}

inline StructureVector operator+(const StructureVector& a, const StructureVector& b) {
  return sum(a, b);
}

inline StructureVector operator*(double c, const StructureVector& s) {
  StructureVector out(s.spaces());
  if (c != 0.0)
    for (const auto& [key, v] : s.bindings()) out.add(key.first, key.second, c * v);
  return out;
}

/// Contracts the depth-|p| block against the role-path vector: the vector of
/// filler coefficients bound at p. Absent paths give the zero vector. Exact
/// because roles are orthonormal.
inline Eigen::VectorXd unbind(const StructureVector& s, const TreePath& p) {
  s.spaces().roles.check(p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.spaces().fillers.dim()));
  for (const auto& [key, c] : s.bindings())
    if (key.second == p) out[static_cast<Eigen::Index>(key.first)] += c;
  return out;
}

/// Sparse inner product; bindings are orthonormal across both fillers and
/// paths, so only shared (filler, path) keys contribute.
inline double inner(const StructureVector& a, const StructureVector& b) {
  if (!(a.spaces() == b.spaces()))
    throw SpaceMismatchError("inner product over different spaces");
  const auto& small = a.binding_count() <= b.binding_count() ? a : b;
  const auto& large = a.binding_count() <= b.binding_count() ? b : a;
  double acc = 0.0;
  for (const auto& [key, c] : small.bindings()) {
    auto it = large.bindings().find(key);
    if (it != large.bindings().end()) acc += c * it->second;
  }
  return acc;
}

namespace detail {

/// Start offset of each depth block within the stacked dense vector.
inline std::vector<std::size_t> block_offsets(const Spaces& sp, int max_depth) {
  std::vector<std::size_t> off(static_cast<std::size_t>(max_depth) + 2, 0);
  for (int d = 0; d <= max_depth; ++d)
    off[static_cast<std::size_t>(d) + 1] =
        off[static_cast<std::size_t>(d)] + sp.fillers.dim() * sp.roles.dim(d);
  return off;
}

inline std::size_t stacked_index(const Spaces& sp,
                                 const std::vector<std::size_t>& off,
                                 std::size_t filler_index, const TreePath& p) {
  const int d = static_cast<int>(p.size());
  return off[static_cast<std::size_t>(d)] +
         filler_index * sp.roles.dim(d) + sp.roles.path_index(p);
}

}  // namespace detail

/// Dense block at one depth, filler-major: index = filler * arity^d + path.
inline Eigen::VectorXd dense_block(const StructureVector& s, int depth) {
  const auto& sp = s.spaces();
  Eigen::VectorXd out =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sp.fillers.dim() * sp.roles.dim(depth)));
  for (const auto& [key, c] : s.bindings())
    if (static_cast<int>(key.second.size()) == depth)
      out[static_cast<Eigen::Index>(key.first * sp.roles.dim(depth) +
                                    sp.roles.path_index(key.second))] += c;
  return out;
}

/// Dense rendering of blocks 0..max_depth concatenated in depth order.
inline Eigen::VectorXd dense_stacked(const StructureVector& s, int max_depth) {
  const auto& sp = s.spaces();
  const auto off = detail::block_offsets(sp, max_depth);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(off.back()));
  for (const auto& [key, c] : s.bindings()) {
    if (static_cast<int>(key.second.size()) > max_depth)
      throw DepthExceededError("binding deeper than requested dense depth");
    out[static_cast<Eigen::Index>(detail::stacked_index(sp, off, key.first, key.second))] += c;
  }
  return out;
}

// ============================================================================
// Bracketed tree literals: [S [N John] [V runs]]
// ============================================================================

struct TreeNode {
  std::string label;
  bool is_word = false;  // bare token (leaf word) rather than a labeled node
  std::vector<TreeNode> children;
};

namespace detail {

inline void skip_ws(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

inline std::string read_atom(std::string_view text, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
         text[pos] != '[' && text[pos] != ']')
    ++pos;
  if (pos == start) throw SyntaxError("expected a label in tree literal");
  return std::string(text.substr(start, pos - start));
}

inline TreeNode parse_tree(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size() || text[pos] != '[')
    throw SyntaxError("tree literal must start with '['");
  ++pos;
  skip_ws(text, pos);
  TreeNode node;
  node.label = read_atom(text, pos);
  for (;;) {
    skip_ws(text, pos);
    if (pos >= text.size()) throw SyntaxError("unbalanced '[' in tree literal");
    if (text[pos] == ']') {
      ++pos;
      return node;
    }
    if (text[pos] == '[') {
      node.children.push_back(parse_tree(text, pos));
    } else {
      TreeNode leaf;
      leaf.label = read_atom(text, pos);
      leaf.is_word = true;
      node.children.push_back(std::move(leaf));
    }
  }
}

}  // namespace detail

inline TreeNode parse_tree_literal(std::string_view text) {
  std::size_t pos = 0;
  TreeNode root = detail::parse_tree(text, pos);
  detail::skip_ws(text, pos);
  if (pos != text.size())
    throw SyntaxError("trailing input after tree literal");
  return root;
}

/// Labels in first-appearance preorder; word leaves included on request.
inline void collect_tree_labels(const TreeNode& node, bool include_words,
                                std::vector<std::string>& out) {
  if (!node.is_word || include_words) {
    if (std::find(out.begin(), out.end(), node.label) == out.end())
      out.push_back(node.label);
  }
  for (const TreeNode& child : node.children)
    collect_tree_labels(child, include_words, out);
}

namespace detail {

inline void tree_bindings(const TreeNode& node, const Spaces& spaces,
                          bool include_words, TreePath& path, StructureVector& out) {
  if (!node.is_word || include_words)
    out.add(spaces.fillers.index_of(node.label), path, 1.0);
  for (std::size_t k = 0; k < node.children.size(); ++k) {
    path.push_back(static_cast<int>(k));
    tree_bindings(node.children[k], spaces, include_words, path, out);
    path.pop_back();
  }
}

}  // namespace detail

/// One coefficient-1 binding per labeled node at its tree path. Child slots
/// count every element (subtree or bare word) left to right; bare words bind
/// only when include_words is set.
inline StructureVector tree_to_structure(const TreeNode& tree, const Spaces& spaces,
                                         bool include_words = false) {
  StructureVector out(spaces);
  TreePath path;
  detail::tree_bindings(tree, spaces, include_words, path, out);
  return out;
}

}  // namespace harmonium
