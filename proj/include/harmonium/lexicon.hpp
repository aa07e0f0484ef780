#pragma once

#include <fstream>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "harmonium/pregroup.hpp"

namespace harmonium {

/// Word-to-type assignments. A word may carry several types; entry order is
/// preserved and used for deterministic tie-breaking downstream.
class Lexicon {
 public:
  Lexicon() = default;

  void add(const std::string& word, PregroupType type) {
    entries_[word].push_back(std::move(type));
  }

  bool contains(const std::string& word) const { return entries_.count(word) > 0; }

  const std::vector<PregroupType>& types_of(const std::string& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) throw UnknownWordError(word);
    return it->second;
  }

  const BaseType& sentence_base() const { return sentence_base_; }
  void set_sentence_base(BaseType b) { sentence_base_ = std::move(b); }

  std::size_t word_count() const { return entries_.size(); }

  /// One entry per line: `word<TAB>type-notation`. Lines starting with `#`
  /// are comments; a `!s <base>` line overrides the sentence base type.
  /// Duplicate words accumulate entries in file order.
  static Lexicon parse(std::istream& in) {
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      if (line.rfind("!s", 0) == 0) {
        std::istringstream hs(line.substr(2));
        std::string base;
        if (!(hs >> base))
          throw SyntaxError("lexicon line " + std::to_string(lineno) +
                            ": '!s' header needs a base type");
        lex.set_sentence_base(BaseType{base});
        continue;
      }
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw SyntaxError("lexicon line " + std::to_string(lineno) +
                          ": expected `word<TAB>type`");
      const std::string word = line.substr(0, tab);
      if (word.empty())
        throw SyntaxError("lexicon line " + std::to_string(lineno) + ": empty word");
      lex.add(word, parse_type(line.substr(tab + 1)));
    }
    return lex;
  }

  static Lexicon load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SyntaxError("cannot open lexicon file: " + path);
    return parse(in);
  }

 private:
  std::unordered_map<std::string, std::vector<PregroupType>> entries_;
  BaseType sentence_base_{"s"};
};

/// One choice of type per word: the concatenated type string plus, for each
/// word, the index of the chosen lexicon entry and the start offset of its
/// simples within the concatenation.
struct TypeAssignment {
  std::vector<std::size_t> entry_indices;
  std::vector<PregroupType> word_types;
  std::vector<std::size_t> offsets;
  PregroupType concatenated;
};

struct AssignmentSet {
  std::vector<TypeAssignment> candidates;
  bool truncated = false;  // candidate count hit the ambiguity cap
};

/// All per-word type combinations (Cartesian product) in lexicographic order
/// by entry index, the first word's index most significant. Output size is
/// min(cap, product of per-word entry counts); hitting the cap truncates and
/// is reported, not an error.
inline AssignmentSet assign_types(std::span<const std::string> words,
                                  const Lexicon& lex, std::size_t cap = 1024) {
  AssignmentSet out;
  std::vector<const std::vector<PregroupType>*> choices;
  choices.reserve(words.size());
  for (const auto& w : words) choices.push_back(&lex.types_of(w));

  std::vector<std::size_t> idx(words.size(), 0);
  for (;;) {
    if (out.candidates.size() == cap) {
      out.truncated = true;
      return out;
    }
    TypeAssignment cand;
    cand.entry_indices = idx;
    cand.word_types.reserve(words.size());
    cand.offsets.reserve(words.size());
    for (std::size_t w = 0; w < words.size(); ++w) {
      const PregroupType& t = (*choices[w])[idx[w]];
      cand.offsets.push_back(cand.concatenated.size());
      cand.word_types.push_back(t);
      cand.concatenated = cand.concatenated + t;
    }
    out.candidates.push_back(std::move(cand));

    // odometer increment, last word fastest
    std::size_t w = words.size();
    while (w > 0) {
      --w;
      if (++idx[w] < choices[w]->size()) break;
      idx[w] = 0;
      if (w == 0) return out;
    }
    if (words.empty()) return out;  // single empty-product candidate
  }
}

}  // namespace harmonium
