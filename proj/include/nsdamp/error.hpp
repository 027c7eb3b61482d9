#pragma once

#include <stdexcept>
#include <string>

namespace nsdamp {

/// Invalid argument or violated precondition on a field, grid or spec.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad configuration. The message is prefixed with the dotted key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Checkpoint could not be read back (version, checksum, truncation, grid mismatch).
class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operational blow-up: a non-finite value or a velocity above the ceiling.
/// Carries the time and the last finite norms that were observed.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t, double last_l2_sq, double last_h1dot_sq)
        : std::runtime_error(what), t_(t), last_l2_sq_(last_l2_sq), last_h1dot_sq_(last_h1dot_sq) {}

    double t() const noexcept { return t_; }
    double last_l2_sq() const noexcept { return last_l2_sq_; }
    double last_h1dot_sq() const noexcept { return last_h1dot_sq_; }

private:
    double t_;
    double last_l2_sq_;
    double last_h1dot_sq_;
};

}  // namespace nsdamp
