#pragma once

#include <stdexcept>
#include <string>

namespace twistcalc {

/// Engine error with a machine-readable code and a human-readable locus.
/// Codes used across the library:
///   NonRootOfUnitySpectrum, NonInvertible, IllFormedProduct,
///   LogResidueAmbiguity, TableIncomplete, NotAutomorphism, CutoffTooSmall,
///   InvalidExponent, PreconditionViolated, NonTerminatingBudget, BadInput.
struct TwistError : std::runtime_error {
  std::string code;
  TwistError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

} // namespace twistcalc

namespace twistcalc::exactalg { using twistcalc::TwistError; }
namespace twistcalc::logcalc { using twistcalc::TwistError; }
namespace twistcalc::voa { using twistcalc::TwistError; }
namespace twistcalc::twisted { using twistcalc::TwistError; }
namespace twistcalc::rewrite { using twistcalc::TwistError; }
