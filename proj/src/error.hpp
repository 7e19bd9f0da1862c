#pragma once

#include <stdexcept>
#include <string>

namespace disct {

enum class ErrorCode {
    InvalidArgument = 1,
    Parse = 2,
    Shape = 3,
    DegenerateColumn = 4,
    Singular = 5,
    Io = 6,
};

class DisctError : public std::runtime_error {
public:
    DisctError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw DisctError(code, what);
}

} // namespace disct
