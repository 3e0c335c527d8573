// Error types shared across the library.
#pragma once
#include <stdexcept>
#include <string>

namespace seglab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BallOutOfDomain : Error {
    using Error::Error;
};

// H(x0,r) fell below the underflow guard; the center sits too deep inside
// the zero set or the radius is too small for the grid.
struct DegenerateAverage : Error {
    using Error::Error;
};

struct NonMonotone : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct Blowup : Error {
    using Error::Error;
};

struct BadAssignment : Error {
    using Error::Error;
};

struct EmptyNodalSet : Error {
    using Error::Error;
};

struct TooCloseToSingular : Error {
    using Error::Error;
};

struct NotTwoComponents : Error {
    using Error::Error;
};

struct EmptyRegion : Error {
    using Error::Error;
};

struct DegenerateSeed : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace seglab
