#pragma once

#include <stdexcept>
#include <string>

namespace oisac {

/// Base of every error raised by the simulator. Anything that is not a
/// ConfigError maps to a numeric failure at the CLI boundary.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DegenerateDepthError : public Error {
public:
    using Error::Error;
};

class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

class InsufficientIlluminationError : public Error {
public:
    using Error::Error;
};

class ZeroGainError : public Error {
public:
    using Error::Error;
};

class InfeasibleThresholdError : public Error {
public:
    using Error::Error;
};

class TotalInternalReflectionError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class NotBracketedError : public Error {
public:
    using Error::Error;
};

/// Invalid or unreadable configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, int line, const std::string& what)
        : Error(format(key, line, what)), key_(key), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string s = "config";
        if (line > 0) s += ":" + std::to_string(line);
        if (!key.empty()) s += ": key '" + key + "'";
        return s + ": " + what;
    }

    std::string key_;
    int line_;
};

}  // namespace oisac
