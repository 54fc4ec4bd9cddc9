#pragma once

#include <stdexcept>
#include <string>

namespace moldflux {

enum class ErrorCode {
    InvalidArgument,
    OutOfDomain,
    NotSpd,
    NoConvergence,
    SingularMatrix,
    Stagnation,
    Integrity,
    UnsupportedVersion,
    Io,
    Config,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

}  // namespace moldflux
