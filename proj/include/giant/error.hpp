// error.hpp — Exception hierarchy shared by every giant module

#pragma once

#include <stdexcept>
#include <string>

namespace giant {

enum class ErrorKind {
    config,       // invalid parameters or schema violations
    integration,  // propagation failed its accuracy checks
    io,           // filesystem failures
    unsupported,  // valid input outside the implemented closed forms
    undefined,    // quantity not defined for this input (e.g. empty bath)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct IntegrationError : Error {
    explicit IntegrationError(const std::string& what) : Error(ErrorKind::integration, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& what) : Error(ErrorKind::unsupported, what) {}
};

struct UndefinedError : Error {
    explicit UndefinedError(const std::string& what) : Error(ErrorKind::undefined, what) {}
};

} // namespace giant
