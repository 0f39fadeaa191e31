#pragma once

#include <stdexcept>
#include <string>

namespace iemb {

/// Invalid parameter or precondition violated by the caller.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Filesystem or stream failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File contents do not match the expected format (bad magic, truncation,
/// malformed text line).
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

/// Node id or index beyond the graph bounds.
class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace iemb
