#pragma once

#include <stdexcept>
#include <string>

namespace corcon {

/// Operand shapes do not conform (matrix/tensor dimension mismatch).
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An index lies outside the tensor along some mode.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A parameter or configuration value is outside its admissible range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input admits no meaningful decomposition (e.g. the zero tensor).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A factor matrix lacks full column rank where full rank is required.
class RankDeficiencyError : public std::domain_error {
 public:
  RankDeficiencyError(int mode, const std::string& what)
      : std::domain_error(what), mode_(mode) {}
  int mode() const noexcept { return mode_; }

 private:
  int mode_;
};

/// Malformed, truncated or unreadable tensor/config file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace corcon
