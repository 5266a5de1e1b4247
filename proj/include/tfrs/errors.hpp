#pragma once

#include <stdexcept>
#include <string>

namespace tfrs {

/// Base class for all recoverable errors raised by this library.
/// The CLI maps these to exit code 2 (data error); anything else
/// escaping to main is an internal error (exit code 3).
class TfrsError : public std::runtime_error {
public:
    explicit TfrsError(const std::string& msg) : std::runtime_error(msg) {}
};

// image-core
class ParseError : public TfrsError {
public:
    ParseError(const std::string& msg, std::size_t byte_offset)
        : TfrsError(msg + " at byte " + std::to_string(byte_offset)),
          offset(byte_offset) {}
    std::size_t offset;
};

class TruncatedError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

class UnsupportedError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

// preprocess
class NoComponentError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

class DegenerateMaskError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

// wavelet / shape contracts
class OddLengthError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

class SizeError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

// eigen / classify
class RankError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

class LabelError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

// harness
class ManifestError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

class IoError : public TfrsError {
public:
    using TfrsError::TfrsError;
};

} // namespace tfrs
