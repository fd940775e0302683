#pragma once

#include <stdexcept>
#include <string>

namespace wavid {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument values (distribution parameters, model constants, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Mismatched lengths, sample intervals or dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

// A wavelet scale below two samples cannot be resolved.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class IllConditionedError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Malformed text input (CSV, surface files, model specs).
class ParseError : public Error {
public:
    using Error::Error;
};

class DiscretizationError : public Error {
public:
    using Error::Error;
};

} // namespace wavid
