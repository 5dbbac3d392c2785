#pragma once

#include <stdexcept>
#include <string>

namespace qanc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QANC_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

QANC_DEFINE_ERROR(DomainError);
QANC_DEFINE_ERROR(UnsupportedError);
QANC_DEFINE_ERROR(StructuralError);
QANC_DEFINE_ERROR(AdmissibilityError);
QANC_DEFINE_ERROR(ConstructionError);
QANC_DEFINE_ERROR(ScheduleError);
QANC_DEFINE_ERROR(PropertyViolation);
QANC_DEFINE_ERROR(NumericGuardError);
QANC_DEFINE_ERROR(OraclePrecisionError);
QANC_DEFINE_ERROR(SurgeryError);
QANC_DEFINE_ERROR(InsufficientDataError);
QANC_DEFINE_ERROR(ConfigError);

#undef QANC_DEFINE_ERROR

}  // namespace qanc
