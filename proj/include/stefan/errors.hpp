#pragma once

#include <stdexcept>
#include <string>

namespace stefan {

// Base of every error raised by the library. kind() is the short tag the CLI
// prints in its first error line.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

#define STEFAN_DEFINE_ERROR(Name, tag)                                     \
    class Name : public Error {                                            \
    public:                                                                \
        using Error::Error;                                                \
        const char* kind() const noexcept override { return tag; }        \
    };

STEFAN_DEFINE_ERROR(DomainError, "domain")
STEFAN_DEFINE_ERROR(NonConvergence, "non-convergence")
STEFAN_DEFINE_ERROR(RangeError, "range")
STEFAN_DEFINE_ERROR(TransformError, "transform")
STEFAN_DEFINE_ERROR(GaugeError, "gauge")
STEFAN_DEFINE_ERROR(GridError, "grid")
STEFAN_DEFINE_ERROR(NoRoot, "no-root")
STEFAN_DEFINE_ERROR(StiffnessError, "stiffness")
STEFAN_DEFINE_ERROR(UnsupportedSubalgebra, "unsupported")
STEFAN_DEFINE_ERROR(UnsupportedCase, "unsupported")

#undef STEFAN_DEFINE_ERROR

// Problem-file and solution-file errors, anchored to a line when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    const char* kind() const noexcept override { return "parse"; }
    int line() const noexcept { return line_; }
    // Same error with "<context>: " in front of the message; the line is kept.
    ParseError with_context(const std::string& context) const { return ParseError(Prefixed{}, context + ": " + what(), line_); }

private:
    struct Prefixed {};
    ParseError(Prefixed, const std::string& full, int line) : Error(full), line_(line) {}
    int line_;
};

}  // namespace stefan
