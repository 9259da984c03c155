#pragma once

#include <stdexcept>
#include <string>

namespace qkd {

// Base type for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidAngle : Error {
    using Error::Error;
};

// Raised when a handle that was sent away or destroyed is measured again.
struct MeasuringDeadQubit : Error {
    using Error::Error;
};

struct SendingDeadQubit : Error {
    using Error::Error;
};

// Unconditional: duplicating an unknown quantum state is not an operation
// this model (or physics) provides.
struct CloningForbidden : Error {
    using Error::Error;
};

struct PadExhausted : Error {
    using Error::Error;
};

struct PadReuse : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct DegenerateBound : Error {
    using Error::Error;
};

struct ChannelClosed : Error {
    using Error::Error;
};

struct DuplicateCustomer : Error {
    using Error::Error;
};

struct UnknownCustomer : Error {
    using Error::Error;
};

struct ZeroPad : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct UnknownParameter : Error {
    using Error::Error;
};

} // namespace qkd
