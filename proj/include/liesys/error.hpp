#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liesys {

/// Classifies failures so callers (and the CLI) can map them to diagnostics
/// and exit codes without string matching.
enum class ErrorKind {
    Domain,                 // argument outside the operation's domain
    Config,                 // bad wiring, dimensions, or run configuration
    SingularConfiguration,  // degenerate inputs (dependent solutions, coincident values)
    Realness,               // a square root that the formula requires to be real is not
    BranchDomain,           // branch-dependent inner expression left its domain
    Inversion,              // no branch reproduces the target state
    NumericConsistency,     // internal identity violated beyond roundoff tolerance
    Pole,                   // quadrature path crosses a zero/pole
    VerificationWindow,     // no usable comparison window remains
    DecompositionDomain,    // group element outside the decomposition chart
    FormulaDomain,          // closed-form expression undefined here (division by zero)
    Io,                     // filesystem / output failure
};

std::string_view error_kind_name(ErrorKind kind);

/// Every error names the module and operation it came from.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, std::string operation, const std::string& message)
        : std::runtime_error(module + "." + operation + ": " + message),
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

}  // namespace liesys
