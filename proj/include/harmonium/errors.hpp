#pragma once

#include <stdexcept>
#include <string>

namespace harmonium {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Type-notation errors: mixed adjoint suffixes, empty base, illegal characters.
struct MalformedTypeError : Error {
  using Error::Error;
};

// Bracketed-tree / grammar-file / tensor-file syntax errors.
struct SyntaxError : Error {
  using Error::Error;
};

struct UnknownWordError : Error {
  explicit UnknownWordError(const std::string& word)
      : Error("unknown word: " + word), word(word) {}
  std::string word;
};

struct UnknownFillerError : Error {
  explicit UnknownFillerError(const std::string& filler)
      : Error("unknown filler: " + filler), filler(filler) {}
  std::string filler;
};

struct DepthExceededError : Error {
  using Error::Error;
};

struct SpaceMismatchError : Error {
  using Error::Error;
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

struct DimMismatchError : Error {
  using Error::Error;
};

struct InputTooLongError : Error {
  using Error::Error;
};

}  // namespace harmonium
