#pragma once

#include <stdexcept>
#include <string>

namespace steady {

enum class ErrorKind {
  Pole,
  NonConvergence,
  Domain,
  Dimension,
  SingularSystem,
  DegenerateState,
  Config,
  Io,
  Other
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define STEADY_ERROR_TYPE(Name, Kind)                                  \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

STEADY_ERROR_TYPE(PoleError, Pole)
STEADY_ERROR_TYPE(NonConvergence, NonConvergence)
STEADY_ERROR_TYPE(DomainError, Domain)
STEADY_ERROR_TYPE(DimensionError, Dimension)
STEADY_ERROR_TYPE(SingularSystem, SingularSystem)
STEADY_ERROR_TYPE(DegenerateState, DegenerateState)
STEADY_ERROR_TYPE(ConfigError, Config)
STEADY_ERROR_TYPE(IoError, Io)

#undef STEADY_ERROR_TYPE

}  // namespace steady
