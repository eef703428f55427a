#pragma once

#include <stdexcept>
#include <string>

namespace lapmor {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LAPMOR_DECLARE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

LAPMOR_DECLARE_ERROR(ParameterShapeError);
LAPMOR_DECLARE_ERROR(PoleProximityError);
LAPMOR_DECLARE_ERROR(CapabilityError);
LAPMOR_DECLARE_ERROR(TruncationFailure);
LAPMOR_DECLARE_ERROR(SingularShiftError);
LAPMOR_DECLARE_ERROR(SymmetryViolation);
LAPMOR_DECLARE_ERROR(WindowViolation);
LAPMOR_DECLARE_ERROR(DegenerateSnapshotError);
LAPMOR_DECLARE_ERROR(ReducedSingularityError);
LAPMOR_DECLARE_ERROR(InvalidContextError);
LAPMOR_DECLARE_ERROR(MultiplicityError);
LAPMOR_DECLARE_ERROR(ProfileFailure);
LAPMOR_DECLARE_ERROR(SingularStepError);
LAPMOR_DECLARE_ERROR(ConfigError);
LAPMOR_DECLARE_ERROR(ArtifactError);

#undef LAPMOR_DECLARE_ERROR

/// Raised by the node-count doubling loop; carries the last discrepancy seen.
class NodeCountFailure : public Error {
 public:
  NodeCountFailure(const std::string& what, double last_discrepancy)
      : Error(what), last_discrepancy_(last_discrepancy) {}
  double last_discrepancy() const { return last_discrepancy_; }

 private:
  double last_discrepancy_;
};

}  // namespace lapmor
