#include "slip/errors.hpp"

namespace slip {

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::GroundStrike: return "ground_strike";
    case FailureReason::LegCrush: return "leg_crush";
    case FailureReason::StanceTimeout: return "stance_timeout";
    case FailureReason::FlightTimeout: return "flight_timeout";
    case FailureReason::ApexBelowTouchdown: return "apex_below_touchdown";
    case FailureReason::InfeasibleReference: return "infeasible_reference";
    case FailureReason::NonFinite: return "non_finite";
  }
  return "unknown";
}

}  // namespace slip
