#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symladder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Two shapes that must be corresponded by vertex index have different sizes.
class ShapeMismatch : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

/// The integrated state left the finite range or exceeded the blow-up bound.
class NonFiniteState : public Error {
public:
  using Error::Error;
};

class DegenerateNeighborhood : public Error {
public:
  DegenerateNeighborhood(const std::string &what, std::size_t vertex)
    : Error(what), vertex_(vertex) {}
  std::size_t vertex() const noexcept { return vertex_; }

private:
  std::size_t vertex_;
};

class IoError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string &source, std::size_t line, const std::string &msg)
    : Error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace symladder
