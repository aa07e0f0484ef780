#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "harmonium/reduce.hpp"
#include "harmonium/tensor.hpp"

namespace harmonium {

/// Dimension of the vector space interpreting each base type; adjoint spaces
/// share the base dimension.
struct TypeSpaceMap {
  std::map<std::string, Eigen::Index> dims;

  Eigen::Index dim_of(const BaseType& base) const {
    auto it = dims.find(base.name);
    if (it == dims.end())
      throw DimMismatchError("no dimension assigned to base type " + base.name);
    return it->second;
  }

  /// Records or cross-checks a base dimension.
  void require(const BaseType& base, Eigen::Index d) {
    if (d < 1) throw DimMismatchError("dimension for " + base.name + " must be >= 1");
    auto [it, fresh] = dims.emplace(base.name, d);
    if (!fresh && it->second != d)
      throw DimMismatchError("conflicting dimensions for base type " + base.name +
                             ": " + std::to_string(it->second) + " vs " +
                             std::to_string(d));
  }
};

/// A word's meaning: a dense tensor with one axis per simple type of its
/// pregroup type, axis k sized by the base of simples[k].
struct WordTensor {
  std::string word;
  PregroupType type;
  Tensor data;
};

namespace detail {

inline void check_word_tensor(const WordTensor& w, const TypeSpaceMap& spaces) {
  if (w.data.rank() != w.type.size())
    throw ShapeMismatchError("word '" + w.word + "': tensor rank " +
                             std::to_string(w.data.rank()) + " != type length " +
                             std::to_string(w.type.size()));
  for (std::size_t k = 0; k < w.type.size(); ++k)
    if (w.data.shape()[k] != spaces.dim_of(w.type[k].base))
      throw DimMismatchError("word '" + w.word + "' axis " + std::to_string(k) +
                             ": size " + std::to_string(w.data.shape()[k]) +
                             " != dims[" + w.type[k].base.name + "]");
}

struct Factor {
  Tensor tensor;
  std::vector<std::size_t> axes;  // global positions in the concatenated type

  std::size_t position_of(std::size_t global_axis) const {
    return static_cast<std::size_t>(
        std::find(axes.begin(), axes.end(), global_axis) - axes.begin());
  }
};

/// Nesting depth of each link: the number of links strictly containing it.
inline std::vector<std::size_t> nesting_depths(const std::vector<Link>& links) {
  std::vector<std::size_t> depth(links.size(), 0);
  for (std::size_t a = 0; a < links.size(); ++a)
    for (std::size_t b = 0; b < links.size(); ++b)
      if (links[b].i < links[a].i && links[a].j < links[b].j) ++depth[a];
  return depth;
}

}  // namespace detail

/// Composes word tensors along the links of a reduction: conceptually the
/// tensor product of all words with every linked axis pair contracted (the
/// inner product over the shared base space), implemented by pairwise factor
/// contraction without materializing the full product. Remaining axes, in
/// original order, carry the residual type. `link_order` gives the
/// contraction schedule as a permutation of indices into r.links.
inline WordTensor compose_ordered(std::span<const WordTensor> words, const Reduction& r,
                                  const TypeSpaceMap& spaces,
                                  std::span<const std::size_t> link_order) {
  PregroupType concat;
  std::string joined;
  for (const WordTensor& w : words) {
    concat = concat + w.type;
    if (!joined.empty()) joined += ' ';
    joined += w.word;
  }
  if (!(concat == r.types))
    throw ShapeMismatchError("concatenated word types do not match the reduction");
  for (const WordTensor& w : words) detail::check_word_tensor(w, spaces);
  {
    std::vector<bool> seen(r.links.size(), false);
    if (link_order.size() != r.links.size())
      throw Error("link order must schedule every link exactly once");
    for (std::size_t oi : link_order) {
      if (oi >= r.links.size() || seen[oi])
        throw Error("link order must schedule every link exactly once");
      seen[oi] = true;
    }
  }

  std::vector<detail::Factor> factors;
  std::vector<bool> alive;
  std::size_t next_axis = 0;
  for (const WordTensor& w : words) {
    detail::Factor f{w.data, {}};
    for (std::size_t k = 0; k < w.type.size(); ++k) f.axes.push_back(next_axis++);
    factors.push_back(std::move(f));
    alive.push_back(true);
  }

  std::vector<std::size_t> owner(next_axis);  // global axis -> factor slot
  for (std::size_t fi = 0; fi < factors.size(); ++fi)
    for (std::size_t ax : factors[fi].axes) owner[ax] = fi;

  for (std::size_t oi : link_order) {
    const Link l = r.links[oi];
    const std::size_t fa = owner[l.i];
    const std::size_t fb = owner[l.j];
    if (fa == fb) {
      detail::Factor& f = factors[fa];
      f.tensor = trace(f.tensor, f.position_of(l.i), f.position_of(l.j));
      f.axes.erase(std::remove_if(f.axes.begin(), f.axes.end(),
                                  [&](std::size_t a) { return a == l.i || a == l.j; }),
                   f.axes.end());
    } else {
      detail::Factor& a = factors[fa];
      detail::Factor& b = factors[fb];
      detail::Factor merged;
      merged.tensor = contract(a.tensor, a.position_of(l.i), b.tensor, b.position_of(l.j));
      for (std::size_t ax : a.axes)
        if (ax != l.i) merged.axes.push_back(ax);
      for (std::size_t ax : b.axes)
        if (ax != l.j) merged.axes.push_back(ax);
      for (std::size_t ax : merged.axes) owner[ax] = fa;
      a = std::move(merged);
      b = detail::Factor{};
      alive[fb] = false;
    }
  }

  // Outer-fold surviving factors (scalars just scale), then put the global
  // axes back in original order.
  Tensor result = Tensor::scalar(1.0);
  std::vector<std::size_t> axes_all;
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    if (!alive[fi]) continue;
    result = outer(result, factors[fi].tensor);
    axes_all.insert(axes_all.end(), factors[fi].axes.begin(), factors[fi].axes.end());
  }
  std::vector<std::size_t> perm(axes_all.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t x, std::size_t y) { return axes_all[x] < axes_all[y]; });
  return WordTensor{std::move(joined), r.residual, result.permuted(perm)};
}

/// Default schedule: innermost links first (deepest nesting), ties by (i, j).
/// Bounds intermediate rank without search; any schedule yields the same
/// residual tensor up to roundoff.
inline WordTensor compose(std::span<const WordTensor> words, const Reduction& r,
                          const TypeSpaceMap& spaces) {
  const auto depth = detail::nesting_depths(r.links);
  std::vector<std::size_t> order(r.links.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (depth[x] != depth[y]) return depth[x] > depth[y];
    return r.links[x] < r.links[y];
  });
  return compose_ordered(words, r, spaces, order);
}

/// Composition under an incomplete reduction; the output rank equals the
/// residual length. Same contraction procedure as compose.
inline WordTensor compose_partial(std::span<const WordTensor> words, const Reduction& r,
                                  const TypeSpaceMap& spaces) {
  return compose(words, r, spaces);
}

// ============================================================================
// Word-tensor files:
//   word <name> : <type-notation> dims <d1 d2 ...>
//   v1 v2 v3 ...            (row-major, may span lines)
// ============================================================================

/// Loaded word tensors plus the base dimensions they imply.
class TensorStore {
 public:
  void add(WordTensor w) {
    for (std::size_t k = 0; k < w.type.size(); ++k)
      spaces_.require(w.type[k].base, w.data.shape()[k]);
    store_.insert_or_assign(w.word, std::move(w));
  }

  bool contains(const std::string& word) const { return store_.count(word) > 0; }

  const WordTensor& get(const std::string& word) const {
    auto it = store_.find(word);
    if (it == store_.end()) throw UnknownWordError(word);
    return it->second;
  }

  const TypeSpaceMap& spaces() const { return spaces_; }
  std::size_t size() const { return store_.size(); }

  static TensorStore parse(std::istream& in) {
    TensorStore out;
    std::string line;
    std::size_t lineno = 0;
    std::string word;
    PregroupType type;
    Tensor::Shape shape;
    std::vector<double> values;
    bool filling = false;

    const auto finish = [&]() {
      if (!filling) return;
      const auto expect = static_cast<std::size_t>(Tensor::flat_size(shape));
      if (values.size() != expect)
        throw SyntaxError("word '" + word + "': expected " + std::to_string(expect) +
                          " values, got " + std::to_string(values.size()));
      Tensor t(shape);
      for (std::size_t k = 0; k < values.size(); ++k)
        t[static_cast<Eigen::Index>(k)] = values[k];
      out.add(WordTensor{word, type, std::move(t)});
      filling = false;
      values.clear();
    };

    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      std::istringstream ls(line);
      const auto fail = [&](const std::string& why) {
        throw SyntaxError("tensor file line " + std::to_string(lineno) + ": " + why);
      };
      if (line.rfind("word", 0) == 0) {
        finish();
        std::string kw, colon;
        ls >> kw >> word >> colon;
        if (kw != "word" || word.empty() || colon != ":")
          fail("expected `word <name> : <type> dims <d...>`");
        std::string tok, type_text;
        bool saw_dims = false;
        while (ls >> tok) {
          if (tok == "dims") {
            saw_dims = true;
            break;
          }
          type_text += tok;
          type_text += ' ';
        }
        if (!saw_dims) fail("missing `dims`");
        type = parse_type(type_text);
        shape.clear();
        Eigen::Index d;
        while (ls >> d) shape.push_back(d);
        if (!ls.eof()) fail("dims must be integers");
        if (shape.size() != type.size())
          throw ShapeMismatchError("word '" + word + "': " + std::to_string(shape.size()) +
                                   " dims for " + std::to_string(type.size()) +
                                   " simple types");
        filling = true;
      } else {
        if (!filling) fail("values before any `word` header");
        double v;
        while (ls >> v) values.push_back(v);
        if (!ls.eof()) fail("malformed value");
      }
    }
    finish();
    return out;
  }

  static TensorStore load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SyntaxError("cannot open tensor file: " + path);
    return parse(in);
  }

 private:
  std::map<std::string, WordTensor> store_;
  TypeSpaceMap spaces_;
};

}  // namespace harmonium
