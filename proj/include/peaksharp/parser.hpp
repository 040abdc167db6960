#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "peaksharp/network.hpp"

namespace peaksharp {

enum class ParseErrorKind { syntax, nonaffine_rate, unknown_identifier, range };

const char* to_string(ParseErrorKind kind);

/// Positioned failure while reading a `.rxn` source. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, ParseErrorKind kind, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  ParseErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  ParseErrorKind kind_;
  std::string message_;
};

/**
 * Reads the line-oriented reaction format:
 *
 *     # comment
 *     name NAME
 *     param NAME = NUMBER
 *     control K range LO HI default D
 *     initial N
 *     reaction S -> T @ EXPR
 *
 * EXPR is built from numbers, declared parameters, `K`, `+ - *` and
 * parentheses, and must have degree at most one in K. The returned network
 * satisfies every invariant checked by validate_network.
 */
ReactionNetwork parse_network(std::string_view source);

/// Canonical text form; parse_network(serialize_network(n)) == n.
std::string serialize_network(const ReactionNetwork& net);

/// Shortest decimal that reads back to the same double (locale independent).
std::string format_number(double value);

}  // namespace peaksharp
