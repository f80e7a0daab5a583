#ifndef EXTORTH_ERRORS_HPP
#define EXTORTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace extorth {

// Root of the library's exception hierarchy. Everything thrown on purpose
// derives from Error; anything else escaping is a bug.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural problems with inputs.
struct InvalidShape : Error {
  using Error::Error;
};
struct FieldMismatch : Error {
  using Error::Error;
};
struct InvalidQuiver : Error {
  using Error::Error;
};
struct CyclicQuiver : Error {
  using Error::Error;
};
struct NotAMorphism : Error {
  using Error::Error;
};
struct InvalidChain : Error {
  using Error::Error;
};
struct NotAComplex : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

// Precondition violations on mathematically meaningful inputs.
struct NotExceptional : Error {
  using Error::Error;
};
struct ProbeNotInIdeal : Error {
  using Error::Error;
};
struct ProbeNotInClass : Error {
  using Error::Error;
};

// Internal cross-checks that theory says can never fail. Any of these firing
// is a build-breaking bug, not a data error.
struct VerificationFailed : Error {
  using Error::Error;
};
struct RouteDisagreement : VerificationFailed {
  using VerificationFailed::VerificationFailed;
};
struct EquivalenceViolation : VerificationFailed {
  using VerificationFailed::VerificationFailed;
};

}  // namespace extorth

#endif
