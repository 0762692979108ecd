#pragma once

#include <stdexcept>
#include <string>

namespace jset {

// Base for all numerical/domain failures raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define JSET_DEFINE_ERROR(Name)                                   \
  struct Name : Error {                                           \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

JSET_DEFINE_ERROR(ZeroLambda);
JSET_DEFINE_ERROR(IncompatibleIndex);
JSET_DEFINE_ERROR(NoConvergence);
JSET_DEFINE_ERROR(OutOfDomain);
JSET_DEFINE_ERROR(NewtonDiverged);
JSET_DEFINE_ERROR(NotRepelling);
JSET_DEFINE_ERROR(DedupFailure);
JSET_DEFINE_ERROR(ResonanceFailure);
JSET_DEFINE_ERROR(OutsideInversionRadius);
JSET_DEFINE_ERROR(BranchAmbiguity);
JSET_DEFINE_ERROR(InvariantViolation);
JSET_DEFINE_ERROR(DomainError);
JSET_DEFINE_ERROR(BranchSelectionFailure);
JSET_DEFINE_ERROR(EmptyComplement);
JSET_DEFINE_ERROR(DerivativeVanishes);
JSET_DEFINE_ERROR(NoBracket);

#undef JSET_DEFINE_ERROR

}  // namespace jset
