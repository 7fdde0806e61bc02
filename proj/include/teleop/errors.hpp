#pragma once

#include <stdexcept>
#include <string>

namespace teleop {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pose extraction hit the XYZ Euler singularity (|cos pitch| < eps).
class GimbalLock : public Error {
public:
    explicit GimbalLock(const std::string& what) : Error("gimbal lock: " + what) {}
};

class DeflectionLimit : public Error {
public:
    explicit DeflectionLimit(const std::string& what) : Error("deflection limit: " + what) {}
};

class Unreachable : public Error {
public:
    explicit Unreachable(const std::string& what) : Error("unreachable wrench: " + what) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what) : Error("no convergence: " + what) {}
};

class BadParams : public Error {
public:
    explicit BadParams(const std::string& what) : Error("bad parameters: " + what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what) : Error("insufficient data: " + what) {}
};

class NoContactDetected : public Error {
public:
    explicit NoContactDetected(const std::string& what) : Error("no contact detected: " + what) {}
};

/// A scenario run stopped on a component error.
class ScenarioFailed : public Error {
public:
    explicit ScenarioFailed(const std::string& what) : Error("scenario failed: " + what) {}
};

}  // namespace teleop
