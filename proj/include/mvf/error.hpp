#pragma once

#include <stdexcept>
#include <string>

namespace mvf {

// Every failure raised by the library derives from Error so callers can map
// categories onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents (headers, keys, timestamps).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed but unusable input (empty audio, negative F0).
class InputError : public Error {
 public:
  using Error::Error;
};

// Values that break a type invariant (variance <= 0, even median order).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Not enough labeled data to fit a model cell.
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Scoring could not produce a report (no voiced frames, split contamination).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures: unreadable, unwritable, missing.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvf
