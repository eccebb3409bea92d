#pragma once

#include <stdexcept>
#include <string>

namespace craftgen {

// Raised for every contract violation in the library. The message is the
// user-facing diagnostic (the CLI prints it verbatim).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace craftgen
