#pragma once

#include <stdexcept>
#include <string>

namespace levelset {

// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define LEVELSET_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

LEVELSET_DEFINE_ERROR(SkeletonPoint);
LEVELSET_DEFINE_ERROR(DegenerateBody);
LEVELSET_DEFINE_ERROR(DimensionMismatch);
LEVELSET_DEFINE_ERROR(EpsTooLarge);
LEVELSET_DEFINE_ERROR(UnsupportedBody);
LEVELSET_DEFINE_ERROR(LambdaOutOfRange);
LEVELSET_DEFINE_ERROR(QuadratureFailure);
LEVELSET_DEFINE_ERROR(EmptySample);
LEVELSET_DEFINE_ERROR(SampleTooLarge);
LEVELSET_DEFINE_ERROR(InfeasibleConstraint);
LEVELSET_DEFINE_ERROR(SearchBudgetExceeded);
LEVELSET_DEFINE_ERROR(NotParallel);
LEVELSET_DEFINE_ERROR(NonRepresentable);
LEVELSET_DEFINE_ERROR(IncompatibleRepresentations);
LEVELSET_DEFINE_ERROR(TruncationHit);
LEVELSET_DEFINE_ERROR(GridTooCoarse);
LEVELSET_DEFINE_ERROR(InsufficientDraws);
LEVELSET_DEFINE_ERROR(InvalidParameter);

#undef LEVELSET_DEFINE_ERROR

}  // namespace levelset
