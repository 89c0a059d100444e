#pragma once

#include <stdexcept>
#include <string>

namespace chemrep {

/// Unrecoverable numerical or contract failure (solver divergence, shape
/// mismatch, non-finite data where finite data is required).
class FaultError : public std::runtime_error {
public:
    explicit FaultError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration rejection. `key_path` names the offending key as
/// "section.key" so CLI messages can point at the exact line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key_path, const std::string& what)
        : std::runtime_error(key_path.empty() ? what : key_path + ": " + what),
          key_path_(std::move(key_path)) {}

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

/// File-system or format failure on an input or output artifact (missing
/// file, malformed header, short read, failed write).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by the time stepper when the sup norm crosses the configured
/// threshold or the state turns non-finite. Carries the detection time.
class BlowUpError : public std::runtime_error {
public:
    explicit BlowUpError(double t)
        : std::runtime_error("blow-up detected at t = " + std::to_string(t)), t_(t) {}

    double time() const noexcept { return t_; }

private:
    double t_;
};

} // namespace chemrep
