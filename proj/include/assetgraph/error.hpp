#pragma once

#include <stdexcept>
#include <string>

namespace assetgraph {

// Base for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Precondition or referential-integrity violation (empty label set,
// dangling edge endpoint, unbound CREATE variable, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// File or transport failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace assetgraph
