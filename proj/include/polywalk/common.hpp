#pragma once

#include <stdexcept>
#include <string>

namespace polywalk {

// A sweep (or size guard) would exceed the configured work budget.
class BudgetExceeded : public std::runtime_error {
public:
  explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// Symbolic iteration grew past the term cap.
class TermCapExceeded : public std::runtime_error {
public:
  explicit TermCapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (carries position information from the parser).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace polywalk
