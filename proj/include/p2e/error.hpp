#pragma once

#include <stdexcept>
#include <string>

namespace p2e {

// Error taxonomy shared by every module. The CLI maps these onto exit codes:
// IoError -> 2, everything else -> 1.

/// Input outside an operation's mathematical domain.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Accumulated state that violates a model invariant (e.g. over-release).
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

/// Unreadable, unwritable or structurally broken files.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by sim::calibrate_c when the target is not bracketed.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, double c_lo, double c_hi, double profit_lo,
                   double profit_hi)
      : std::runtime_error(what),
        c_lo_(c_lo),
        c_hi_(c_hi),
        profit_lo_(profit_lo),
        profit_hi_(profit_hi) {}

  double c_lo() const noexcept { return c_lo_; }
  double c_hi() const noexcept { return c_hi_; }
  double profit_lo() const noexcept { return profit_lo_; }
  double profit_hi() const noexcept { return profit_hi_; }

 private:
  double c_lo_;
  double c_hi_;
  double profit_lo_;
  double profit_hi_;
};

/// Rank-deficient regression design.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Header-level ingestion failure (missing columns and the like). Per-row
/// problems never throw; they land in the rejects report.
class IngestError : public IoError {
 public:
  explicit IngestError(const std::string& what) : IoError(what) {}
};

/// Short machine-parseable tag for an exception ("domain", "io", ...).
std::string error_kind(const std::exception& e);

}  // namespace p2e
