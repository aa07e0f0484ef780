#pragma once

#include <cctype>
#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "harmonium/errors.hpp"

namespace harmonium {

/// An atomic grammatical type such as n (noun) or s (sentence).
struct BaseType {
  std::string name;

  BaseType() = default;
  explicit BaseType(std::string n) : name(std::move(n)) {}

  auto operator<=>(const BaseType&) const = default;
};

enum class Side { Left, Right };

/// A base type with an iterated-adjoint degree:
///   degree 0 = x, -1 = x^l, +1 = x^r, -2 = x^ll, +2 = x^rr, ...
struct SimpleType {
  BaseType base;
  int degree = 0;

  SimpleType() = default;
  SimpleType(BaseType b, int d) : base(std::move(b)), degree(d) {}
  SimpleType(std::string name, int d) : base(std::move(name)), degree(d) {}

  auto operator<=>(const SimpleType&) const = default;
};

/// An ordered sequence of simple types; the empty sequence is the unit type 1.
struct PregroupType {
  std::vector<SimpleType> simples;

  PregroupType() = default;
  explicit PregroupType(std::vector<SimpleType> s) : simples(std::move(s)) {}

  static PregroupType unit() { return PregroupType{}; }

  std::size_t size() const { return simples.size(); }
  bool is_unit() const { return simples.empty(); }
  const SimpleType& operator[](std::size_t i) const { return simples[i]; }

  auto operator<=>(const PregroupType&) const = default;
};

/// Concatenation of type strings; the unit type is its identity.
inline PregroupType operator+(const PregroupType& a, const PregroupType& b) {
  PregroupType out = a;
  out.simples.insert(out.simples.end(), b.simples.begin(), b.simples.end());
  return out;
}

/// Left adjoint decrements the degree, right adjoint increments it.
inline SimpleType adjoint(const SimpleType& t, Side side) {
  return SimpleType{t.base, side == Side::Left ? t.degree - 1 : t.degree + 1};
}

/// True iff the adjacent pair (a, b) cancels: same base and b one adjoint
/// step to the right of a. Covers x^l x (degrees -1, 0), x x^r (0, +1) and
/// all iterated cases (z, z+1). The reversed orders (x^r x, x x^l) are unit
/// introductions, not reductions, and do not cancel.
inline bool cancels(const SimpleType& a, const SimpleType& b) {
  return a.base == b.base && b.degree == a.degree + 1;
}

namespace detail {

inline bool legal_base_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

inline SimpleType parse_simple(std::string_view tok) {
  const auto caret = tok.find('^');
  std::string_view base = tok.substr(0, caret);
  if (base.empty())
    throw MalformedTypeError("empty base in type token '" + std::string(tok) + "'");
  for (char c : base)
    if (!legal_base_char(c))
      throw MalformedTypeError("illegal character '" + std::string(1, c) +
                               "' in type token '" + std::string(tok) + "'");
  int degree = 0;
  if (caret != std::string_view::npos) {
    std::string_view suffix = tok.substr(caret + 1);
    if (suffix.empty())
      throw MalformedTypeError("empty adjoint suffix in '" + std::string(tok) + "'");
    const char kind = suffix.front();
    if (kind != 'l' && kind != 'r')
      throw MalformedTypeError("adjoint suffix must be l...l or r...r in '" +
                               std::string(tok) + "'");
    for (char c : suffix)
      if (c != kind)
        throw MalformedTypeError("mixed adjoint suffix in '" + std::string(tok) + "'");
    degree = kind == 'l' ? -static_cast<int>(suffix.size())
                         : static_cast<int>(suffix.size());
  }
  return SimpleType{BaseType{std::string(base)}, degree};
}

}  // namespace detail

/// Parses whitespace-separated type notation: `n`, `n^l`, `s^rr`, ...
/// Empty or blank text yields the unit type.
inline PregroupType parse_type(std::string_view text) {
  PregroupType out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    out.simples.push_back(detail::parse_simple(text.substr(pos, end - pos)));
    pos = end;
  }
  return out;
}

inline std::string render(const SimpleType& t) {
  std::string out = t.base.name;
  if (t.degree != 0) {
    out += '^';
    out.append(static_cast<std::size_t>(std::abs(t.degree)),
               t.degree < 0 ? 'l' : 'r');
  }
  return out;
}

/// Canonical notation; render then parse round-trips exactly.
inline std::string render(const PregroupType& t) {
  std::string out;
  for (std::size_t k = 0; k < t.simples.size(); ++k) {
    if (k) out += ' ';
    out += render(t.simples[k]);
  }
  return out;
}

}  // namespace harmonium
