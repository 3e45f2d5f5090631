#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slip {

/// Precondition or invariant violation on caller-supplied data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite state or derivative produced during integration.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No guard crossing was found within the configured horizon.
class EventTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FailureReason {
  GroundStrike,
  LegCrush,
  StanceTimeout,
  FlightTimeout,
  ApexBelowTouchdown,
  InfeasibleReference,
  NonFinite,
};

std::string_view to_string(FailureReason reason);

/// A gait cycle could not be completed. Carries a machine-readable reason.
class GaitFailure : public std::runtime_error {
 public:
  GaitFailure(FailureReason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}

  FailureReason reason() const noexcept { return reason_; }

 private:
  FailureReason reason_;
};

}  // namespace slip
