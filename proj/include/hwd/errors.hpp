#pragma once

#include <stdexcept>

namespace hwd {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Frame, mask or feature dimensions violate an operation's requirements.
struct DimensionError : Error {
    using Error::Error;
};

/// Unreadable or missing input (file, directory, frame). CLI exit code 2.
struct InputError : Error {
    using Error::Error;
};

/// Malformed serialized data (model file, image file). CLI exit code 3.
struct FormatError : Error {
    using Error::Error;
};

/// A parameter value violates its documented range; the message names the
/// offending field. CLI exit code 4.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace hwd
