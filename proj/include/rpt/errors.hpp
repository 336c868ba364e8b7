#pragma once

#include <stdexcept>
#include <string>

namespace rpt {

// Base of every error thrown by the library. code() is a stable one-word
// identifier that the CLI prints in front of the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define RPT_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

RPT_DEFINE_ERROR(DimensionError)
RPT_DEFINE_ERROR(NonFiniteInput)
RPT_DEFINE_ERROR(DivisibilityError)
RPT_DEFINE_ERROR(RegimeError)
RPT_DEFINE_ERROR(DegenerateError)
RPT_DEFINE_ERROR(RankError)
RPT_DEFINE_ERROR(DomainError)
RPT_DEFINE_ERROR(ConfigError)
RPT_DEFINE_ERROR(ParseError)
RPT_DEFINE_ERROR(ClosureError)
RPT_DEFINE_ERROR(NumericalError)

#undef RPT_DEFINE_ERROR

}  // namespace rpt
