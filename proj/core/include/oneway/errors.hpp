#pragma once

#include <stdexcept>
#include <string>

namespace oneway {

/// Input failed a structural invariant (bad file, bad argument, bad range).
/// The CLI maps this to exit code 1.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// The request is well-formed but cannot be served: an enumeration cap was
/// exceeded or no feasible answer exists. The CLI maps this to exit code 2.
class cap_error : public std::runtime_error {
public:
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace oneway
