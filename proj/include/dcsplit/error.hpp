#ifndef DCSPLIT_ERROR_HPP
#define DCSPLIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dcsplit {

enum class ErrorCode {
    ZeroVector,
    CapExceeded,
    NotBalanced,
    NotConvex,
    NotRegular,
    NotSubmodular,
    ComplexMismatch,
    DecompositionMismatch,
    Infeasible,
    WrongDim,
    DimMismatch,
    EmptyList,
    ParamsTooSmall,
    InvalidInput,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace dcsplit

#endif
