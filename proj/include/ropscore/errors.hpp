#pragma once

#include <stdexcept>
#include <string>

namespace ropscore {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No gadget line in the input survived parsing.
struct EmptyCorpusError : Error {
    using Error::Error;
};

// Bad option value or malformed override file.
struct ConfigError : Error {
    using Error::Error;
};

// Two reports produced under different configurations cannot be compared.
struct ConfigMismatchError : Error {
    using Error::Error;
};

} // namespace ropscore
