#pragma once

#include <stdexcept>
#include <string>

namespace epicast {

/// Bad input data or configuration. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Not enough observations before an index for the requested statistic.
class InsufficientHistory : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Network-level provider failure (connection refused, HTTP error, bad envelope).
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pipeline stage received data dated after its forecast origin.
class LeakError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace epicast
