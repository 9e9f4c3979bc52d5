#pragma once

#include <stdexcept>
#include <string>

namespace fsmf {

/// A solver was asked to run outside its certified assumptions and
/// best-effort mode was not requested.
class CertificateMismatchError : public std::runtime_error {
public:
    explicit CertificateMismatchError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation's documented precondition does not hold for the inputs.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// File parsing failure; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace fsmf
