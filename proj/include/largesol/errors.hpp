#pragma once

#include <stdexcept>
#include <string>

namespace largesol {

/// Broad failure class; drives the CLI exit code.
enum class ErrorKind { config, solver, verification, io };

/// Base error. Carries the module and operation that raised it so that
/// command-line diagnostics can name the failing step.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string operation, const std::string& message)
      : std::runtime_error(module + "::" + operation + ": " + message),
        kind_(kind),
        module_(std::move(module)),
        operation_(std::move(operation)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string operation_;
};

#define LARGESOL_DEFINE_ERROR(Name, Kind)                                                   \
  class Name : public Error {                                                               \
   public:                                                                                  \
    Name(std::string module, std::string operation, const std::string& message)             \
        : Error(ErrorKind::Kind, std::move(module), std::move(operation), message) {}        \
  };

LARGESOL_DEFINE_ERROR(InvalidDomainError, config)
LARGESOL_DEFINE_ERROR(EmptyErosionError, config)
LARGESOL_DEFINE_ERROR(InvalidResolutionError, config)
LARGESOL_DEFINE_ERROR(InvalidInputError, config)
LARGESOL_DEFINE_ERROR(InvalidNonlinearityError, config)
LARGESOL_DEFINE_ERROR(RangeError, config)
LARGESOL_DEFINE_ERROR(ParameterRangeError, config)
LARGESOL_DEFINE_ERROR(ConfigError, config)
LARGESOL_DEFINE_ERROR(SolverFailureError, solver)
LARGESOL_DEFINE_ERROR(CoverageError, solver)
LARGESOL_DEFINE_ERROR(CompositionError, solver)
LARGESOL_DEFINE_ERROR(UndefinedTransformError, solver)
LARGESOL_DEFINE_ERROR(ShootingFailureError, solver)
LARGESOL_DEFINE_ERROR(ConvergenceFailureError, solver)
LARGESOL_DEFINE_ERROR(VerificationError, verification)
LARGESOL_DEFINE_ERROR(IoError, io)

#undef LARGESOL_DEFINE_ERROR

/// Exit status for a failure of the given kind.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::solver: return 3;
    case ErrorKind::verification: return 4;
    case ErrorKind::io: return 5;
  }
  return 1;
}

}  // namespace largesol
