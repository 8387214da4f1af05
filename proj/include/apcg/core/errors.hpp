#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apcg {

// Bad argument values: dimension mismatch, non-finite input, domain violation.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent solver or experiment configuration, detected before running.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical guarantee the code relies on did not hold.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class step_size_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class label_error : public parse_error {
 public:
  using parse_error::parse_error;
};

}  // namespace apcg
