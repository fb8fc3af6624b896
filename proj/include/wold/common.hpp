#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wold {

using cplx = std::complex<double>;

/// Error with a stable machine-readable code ("WindowMismatch", "GuardTooSmall", ...)
/// plus a human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& msg) {
    throw Error(std::move(code), msg);
}

} // namespace wold
