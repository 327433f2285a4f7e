#pragma once

#include <stdexcept>
#include <string>

namespace di {

// Raised for bad user input (flags, config files, malformed corpora,
// violated preconditions). The CLI maps this to exit code 1; every other
// exception exits 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace di
