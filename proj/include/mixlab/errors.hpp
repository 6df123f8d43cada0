#pragma once

#include <stdexcept>
#include <string>

namespace mixlab {

// Violated precondition or invalid type/family pairing.
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Value outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A component lost all responsibility mass during an M-step; the fit
// driver treats this as a restart signal.
class component_death_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every restart of a fit failed.
class fit_failure_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or data file.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mixlab
