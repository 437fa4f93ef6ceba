#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bol {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Φ⁻¹(s) could not be bracketed below the overflow bound.
class UnboundedInverseError : public Error {
 public:
  using Error::Error;
};

/// Φ vanishes at a positive argument where a ratio by Φ is required.
class DegenerateFunctionError : public Error {
 public:
  using Error::Error;
};

/// sup_t {ts − Φ(t)} is +∞ at the requested s.
class ConjugateInfiniteError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// No λ brings the modular below 1 inside the overflow bracket.
class DivergentNormError : public Error {
 public:
  using Error::Error;
};

/// A Cesàro symbol with g(0) ≠ 0 or Rg(0) ≠ 0.
class SymbolInvariantError : public Error {
 public:
  using Error::Error;
};

/// Precondition of a verification suite failed (e.g. M = 0).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed function-spec, growth id or config document.
class FormatError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  NonFiniteError(std::size_t node, const std::string& what)
      : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

}  // namespace bol
