#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdq {

class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed `.hdq` text or word literal.
class parse_error : public error
{
public:
  parse_error(std::size_t line, std::size_t column, const std::string& what)
    : error("line " + std::to_string(line) + ", column "
            + std::to_string(column) + ": " + what),
      line_(line), column_(column)
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

// Structurally invalid automaton, arena, word or argument.
class validation_error : public error
{
public:
  using error::error;
};

// Automaton class whose HDness is not decided by this library.
class out_of_scope_error : public error
{
public:
  using error::error;
};

// Operation not available for the given input (e.g. resolver of a G2 route).
class unsupported_error : public error
{
public:
  using error::error;
};

// A certification or consistency check failed; always a bug.
class internal_error : public error
{
public:
  using error::error;
};

} // namespace hdq
