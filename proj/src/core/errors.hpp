#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace privar {

// Stable error categories; the C API maps these 1:1 onto status codes.
enum class ErrorCode {
    invalid_argument = 1,
    io = 2,
    decode = 3,
    parse = 4,
    missing = 5,
    transport = 6,
    rejected = 7,
    internal = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& message)
        : Error(ErrorCode::invalid_argument, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorCode::io, message) {}
};

// Malformed encoded stream. byte_offset is the position where decoding stopped.
class DecodeError : public Error {
public:
    DecodeError(const std::string& message, std::size_t byte_offset)
        : Error(ErrorCode::decode,
                message + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// Structured text did not match the expected grammar; carries the raw text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, const std::string& raw_text)
        : Error(ErrorCode::parse, message + "; raw text: \"" + raw_text + "\""),
          raw_text_(raw_text) {}

    const std::string& raw_text() const { return raw_text_; }

private:
    std::string raw_text_;
};

// A required record (scenario, annotation, transcript, sidecar row) is absent.
class MissingError : public Error {
public:
    explicit MissingError(const std::string& message) : Error(ErrorCode::missing, message) {}
};

class TransportError : public Error {
public:
    explicit TransportError(const std::string& message)
        : Error(ErrorCode::transport, message) {}
};

// A request violated a service contract (e.g. unobfuscated frame refused).
class RejectedError : public Error {
public:
    explicit RejectedError(const std::string& message) : Error(ErrorCode::rejected, message) {}
};

}  // namespace privar
