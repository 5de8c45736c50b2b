#pragma once

#include <stdexcept>
#include <string>

namespace xenomon {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable stream, unwritable file, storage failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input that does not follow the expected file or wire layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Downloaded content whose digest does not match its manifest entry.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// HTTP failure. `retryable()` is true for connection errors and 5xx.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable, int status = 0)
      : Error(what), retryable_(retryable), status_(status) {}

  bool retryable() const noexcept { return retryable_; }
  int status() const noexcept { return status_; }

 private:
  bool retryable_;
  int status_;
};

// Caller-supplied argument outside the operation's contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid date or date range (start after end, pre-2017 DOC API request).
class DateRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Bucket sets of two series do not line up.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace xenomon
