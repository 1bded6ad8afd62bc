#pragma once

#include <stdexcept>
#include <string>

namespace ellgen {

enum class errc {
  not_invertible,
  zero_q_exponent,
  fractional_power_of_negative,
  non_unit_constant_term,
  truncation_too_shallow,
  inconsistent_hodge_table,
  non_simplicial,
  non_smooth_fan,
  stabilization_failure,
  not_gorenstein,
  not_reflexive,
  degenerate_input,
  insufficient_input_order,
  parity_mismatch,
  parse_error,
  validation_error,
  overflow,
  internal
};

inline const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::not_invertible: return "NotInvertible";
    case errc::zero_q_exponent: return "ZeroQExponent";
    case errc::fractional_power_of_negative: return "FractionalPowerOfNegative";
    case errc::non_unit_constant_term: return "NonUnitConstantTerm";
    case errc::truncation_too_shallow: return "TruncationTooShallow";
    case errc::inconsistent_hodge_table: return "InconsistentHodgeTable";
    case errc::non_simplicial: return "NonSimplicial";
    case errc::non_smooth_fan: return "NonSmoothFan";
    case errc::stabilization_failure: return "StabilizationFailure";
    case errc::not_gorenstein: return "NotGorenstein";
    case errc::not_reflexive: return "NotReflexive";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::insufficient_input_order: return "InsufficientInputOrder";
    case errc::parity_mismatch: return "ParityMismatch";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
    case errc::overflow: return "Overflow";
    case errc::internal: return "InternalError";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace ellgen
