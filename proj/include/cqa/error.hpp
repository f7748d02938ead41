#pragma once

#include <stdexcept>
#include <string>

namespace cqa {

// Input or artifact problems: malformed files, missing paths, bad schemas.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training or evaluation configuration problems: degenerate label sets,
// unknown label references, impossible fold counts.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqa
