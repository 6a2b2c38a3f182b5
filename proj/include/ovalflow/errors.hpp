#pragma once

#include <stdexcept>
#include <string>

namespace ovalflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define OVALFLOW_DEFINE_ERROR(Name, tag)                          \
  class Name : public Error {                                    \
   public:                                                       \
    using Error::Error;                                          \
    const char* kind() const noexcept override { return tag; }   \
  };

OVALFLOW_DEFINE_ERROR(DomainError, "domain")
OVALFLOW_DEFINE_ERROR(ArityError, "arity")
OVALFLOW_DEFINE_ERROR(CapabilityError, "capability")
OVALFLOW_DEFINE_ERROR(GeometryError, "geometry")
OVALFLOW_DEFINE_ERROR(ConditioningError, "conditioning")
OVALFLOW_DEFINE_ERROR(ConstructionError, "construction")
OVALFLOW_DEFINE_ERROR(StepFailure, "step-failure")
OVALFLOW_DEFINE_ERROR(SingularTimeError, "singular-time")
OVALFLOW_DEFINE_ERROR(HypothesisError, "hypothesis")
OVALFLOW_DEFINE_ERROR(NormalizationError, "normalization")
OVALFLOW_DEFINE_ERROR(RangeError, "range")
OVALFLOW_DEFINE_ERROR(ConfigError, "config")

#undef OVALFLOW_DEFINE_ERROR

}  // namespace ovalflow
