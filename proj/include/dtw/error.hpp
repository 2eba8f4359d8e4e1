#pragma once

#include <stdexcept>
#include <string>

namespace dtw {

// Bad or unreadable input data (files, datasets, CSVs).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An internal invariant did not hold. Always a bug or corrupted numeric input.
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace dtw
