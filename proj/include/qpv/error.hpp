#pragma once

#include <stdexcept>
#include <string>

namespace qpv {

enum class ErrorCode {
    Domain = 1,
    Capacity,
    Integrity,
    Parse,
    Io,
    Internal,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qpv
