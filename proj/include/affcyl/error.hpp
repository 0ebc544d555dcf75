#pragma once

#include <stdexcept>
#include <string>

namespace affcyl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define AFFCYL_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

// jet engine
AFFCYL_DEFINE_ERROR(DomainError);
AFFCYL_DEFINE_ERROR(UnknownVariable);
AFFCYL_DEFINE_ERROR(ParseError);
// gauss analysis / frames
AFFCYL_DEFINE_ERROR(NotImmersed);
AFFCYL_DEFINE_ERROR(SingularBasePoint);
AFFCYL_DEFINE_ERROR(FrameIllConditioned);
AFFCYL_DEFINE_ERROR(InvalidSpec);
// pencil
AFFCYL_DEFINE_ERROR(MTooSmall);
AFFCYL_DEFINE_ERROR(NoRegularPair);
AFFCYL_DEFINE_ERROR(SingularLeadingForm);
AFFCYL_DEFINE_ERROR(HypothesisNotMet);
// classify
AFFCYL_DEFINE_ERROR(DriftTooLarge);
AFFCYL_DEFINE_ERROR(InconsistentVertex);
// corpus
AFFCYL_DEFINE_ERROR(DependentGenerators);
AFFCYL_DEFINE_ERROR(DegenerateJoin);
AFFCYL_DEFINE_ERROR(BudgetExceeded);

#undef AFFCYL_DEFINE_ERROR

} // namespace affcyl
