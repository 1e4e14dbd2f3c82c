#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wrearr {

/// An input violates a documented invariant (non-monotone weight, bad shape, ...).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The Jacobi iteration did not reach tolerance within the sweep limit.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::size_t block)
      : std::runtime_error(what + " (block " + std::to_string(block) + ")"), block_(block) {}
  [[nodiscard]] std::size_t block() const noexcept { return block_; }

 private:
  std::size_t block_;
};

/// psi(|a|) is infinite somewhere on the spectrum of a.
class membership_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The request exceeds what an exhaustive method is willing to enumerate.
class refusal_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace wrearr
