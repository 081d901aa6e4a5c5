#pragma once

#include <stdexcept>
#include <string>

namespace adm {

enum class ErrorKind {
    Input,        // malformed text or arguments
    Structural,   // violated structural invariant (starved vertex, bad gate index)
    Unsupported,  // objective kind not handled by the requested engine
    Guard,        // a configured size guard was exceeded
    Internal      // an internal consistency check failed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

/// Exit status used by the command-line tool for an error of the given kind.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Guard: return 3;
    case ErrorKind::Internal: return 4;
    default: return 2;
    }
}

}  // namespace adm
