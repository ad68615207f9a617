#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace axtile {

enum class Errc {
  malformed_path,
  invalid_polyomino,
  syntax,
  duplicate_id,
  unresolved_id,
  scale_out_of_range,
  disconnected_shape,
  invalid_mark,
  no_rule,
  overlap,
  unmatched_occurrence,
  invalid_decomposition,
  window_out_of_range,
  invalid_argument,
  io,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Syntax errors carry a 1-based line and column into the offending text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(Errc::syntax, what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace axtile
