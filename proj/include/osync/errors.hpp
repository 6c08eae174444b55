#pragma once

#include <stdexcept>
#include <string>

namespace osync {

// Raised for malformed arguments: dimension mismatches, non-finite entries,
// violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A d x p matrix whose smallest singular value is numerically zero relative
// to its largest, so the polar factor is not unique.
class RankDeficient : public std::runtime_error {
 public:
  RankDeficient(const std::string& what, double ratio)
      : std::runtime_error(what), ratio_(ratio) {}

  // sigma_d / sigma_1 of the offending matrix.
  double ratio() const { return ratio_; }

 private:
  double ratio_;
};

}  // namespace osync
