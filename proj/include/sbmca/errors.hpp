#pragma once

#include <stdexcept>
#include <string>

namespace sbmca {

// Thrown when an iterative stage produces non-finite values; carries the
// stage tag for diagnostics.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sbmca
