#pragma once

#include <stdexcept>
#include <string>

namespace tucker {

/// A numerical parameter (rank, sketch size, mode index, shape) violates an
/// operation's preconditions.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// File could not be read, written, or parsed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tucker
