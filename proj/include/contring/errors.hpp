#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contring {

// Malformed ring-spec or element-literal text. `position` is a byte offset
// into the offending input.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A structurally valid spec that cannot be materialized: size cap exceeded,
// reducible modulus, axiom violation, unreadable table file, ...
class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters outside a closed form's stated domain. A non-exact division
// inside a formula also lands here: it signals an inconsistent parameter set,
// never a rounding concern.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or table build would exceed the configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace contring
