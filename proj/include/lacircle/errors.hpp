#pragma once

#include <stdexcept>
#include <string>

namespace lacircle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// File contents are not a supported or well-formed format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A configuration value is out of range or a config file is malformed.
class ConfigError : public Error {
public:
    using Error::Error;
};

class CollinearPoints : public Error {
public:
    CollinearPoints() : Error("points are collinear") {}
};

class EmptyPerimeter : public Error {
public:
    EmptyPerimeter() : Error("circle perimeter lies entirely outside the image") {}
};

/// The "no detection possible" family. The CLI maps these to exit code 2.
class DetectionError : public Error {
public:
    using Error::Error;
};

class TooFewEdgePoints : public DetectionError {
public:
    using DetectionError::DetectionError;
};

class NoFeasibleActions : public DetectionError {
public:
    using DetectionError::DetectionError;
};

class PlacementFailure : public Error {
public:
    using Error::Error;
};

}  // namespace lacircle
