#pragma once

#include <stdexcept>
#include <string>

namespace schartree {

/// Bad input: preconditions, config validation, grid/frame mismatches.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulation left the regime where its output can be trusted
/// (non-finite samples, wave mass reaching the periodic boundary, ...).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace schartree
