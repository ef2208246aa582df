#pragma once

#include <stdexcept>
#include <string>

namespace pmivec {

/// Runtime failure anywhere in the library. The CLI maps this to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pmivec
