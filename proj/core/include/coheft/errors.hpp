#pragma once

#include <stdexcept>
#include <string>

namespace coheft {

/// Base class of everything this library throws. `code()` is a stable
/// machine-readable tag, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

#define COHEFT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
  public:                                                           \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

COHEFT_DEFINE_ERROR(NonHermitianInput);
COHEFT_DEFINE_ERROR(NonUnitaryInput);
COHEFT_DEFINE_ERROR(InvalidStateMatrix);
COHEFT_DEFINE_ERROR(InvalidBeta);
COHEFT_DEFINE_ERROR(AngleOutOfRange);
COHEFT_DEFINE_ERROR(DimensionMismatch);
COHEFT_DEFINE_ERROR(InvalidBlochVector);
COHEFT_DEFINE_ERROR(InvalidTrajectory);
COHEFT_DEFINE_ERROR(EigenTrackingAmbiguous);
COHEFT_DEFINE_ERROR(MismatchedProtocol);
COHEFT_DEFINE_ERROR(InvalidExposure);
COHEFT_DEFINE_ERROR(InvalidNoiseConfig);
COHEFT_DEFINE_ERROR(InvalidResamples);
COHEFT_DEFINE_ERROR(EmptyRecord);
COHEFT_DEFINE_ERROR(ArrowPropertyViolated);
COHEFT_DEFINE_ERROR(ConfigParse);
COHEFT_DEFINE_ERROR(MissingField);
COHEFT_DEFINE_ERROR(IOFailure);

#undef COHEFT_DEFINE_ERROR

}  // namespace coheft
