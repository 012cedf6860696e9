#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace restrictml {

// Base class for everything this library throws on bad data.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (FASTA, TSV, CSV). Carries a 1-based line number
// when one is known; line() == 0 means "not line-addressable".
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message)
        : Error(message), line_(0) {}
    ParseError(const std::string& message, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A value violates an operation's precondition (empty sequence where one
// is required, out-of-range parameter, dimension mismatch, ...).
class ValueError : public Error {
public:
    using Error::Error;
};

// Filesystem trouble: missing file, unreadable path, failed write.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace restrictml
