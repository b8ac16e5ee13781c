#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chartdesign {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A violated operation precondition (bad fraction, empty corpus, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input; `offset` is the byte position reported by the parser.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace chartdesign
