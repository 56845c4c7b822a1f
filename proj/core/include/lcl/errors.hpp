#pragma once

#include <stdexcept>
#include <string>

namespace lcl {

// Exit codes used by the CLI. Library code throws; main() maps to these.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitInstability = 3,
    kExitInfeasible = 4,
    kExitIo = 5,
};

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual int exit_code() const { return 1; }
};

struct ConfigError : Error {
    using Error::Error;
    int exit_code() const override { return kExitConfig; }
};

struct GridMismatch : Error {
    using Error::Error;
};

struct SymmetryViolation : Error {
    using Error::Error;
};

struct OutOfDomain : Error {
    using Error::Error;
};

struct Instability : Error {
    using Error::Error;
    int exit_code() const override { return kExitInstability; }
};

struct InfeasibleAmplitude : Error {
    using Error::Error;
    int exit_code() const override { return kExitInfeasible; }
};

struct NotSL2 : Error {
    using Error::Error;
};

struct TargetNotAttainable : Error {
    using Error::Error;
    int exit_code() const override { return kExitInfeasible; }
};

struct ToleranceNotMet : Error {
    using Error::Error;
    int exit_code() const override { return kExitInfeasible; }
};

struct SizeMismatch : Error {
    using Error::Error;
};

struct IoFailure : Error {
    using Error::Error;
    int exit_code() const override { return kExitIo; }
};

struct VersionMismatch : Error {
    using Error::Error;
    int exit_code() const override { return kExitIo; }
};

}  // namespace lcl
