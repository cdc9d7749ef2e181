#pragma once

#include <stdexcept>
#include <string>

namespace simpair {

// Thrown for data problems and violated preconditions throughout the library.
// The what() string names the offending column, flag, or value.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace simpair
