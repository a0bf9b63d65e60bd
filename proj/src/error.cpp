#include "p2e/error.hpp"

namespace p2e {

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const IngestError*>(&e) != nullptr) return "ingest";
  if (dynamic_cast<const IoError*>(&e) != nullptr) return "io";
  if (dynamic_cast<const DomainError*>(&e) != nullptr) return "domain";
  if (dynamic_cast<const StateError*>(&e) != nullptr) return "state";
  if (dynamic_cast<const CalibrationError*>(&e) != nullptr) return "calibration";
  if (dynamic_cast<const FitError*>(&e) != nullptr) return "fit";
  return "internal";
}

}  // namespace p2e
