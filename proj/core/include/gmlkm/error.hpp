#pragma once

#include <stdexcept>
#include <string>

namespace gmlkm {

/// Raised for malformed or inconsistent user input (documents, configs, tables).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when pipeline stages disagree with each other, e.g. a pairing
/// matrix that references a hit no track owns.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gmlkm
