#ifndef HYPISO_ERROR_HPP
#define HYPISO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hypiso {

enum class Err {
    ContextMismatch,
    NotUnit,
    NoSquareRoot,
    BadBranch,
    NonIntegral,
    NonIntegralIntegral,
    NotInvertible,
    BadInit,
    NotSeparable,
    BadInitialData,
    WeierstrassImage,
    WeierstrassPoint,
    SingularReduction,
    CollidingRoots,
    NotRational,
    NoSolution,
    PoleAtPoint,
    SingularH,
    DegenerateDivisor,
    LengthMismatch,
    SchemaError,
    Unsupported,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& detail)
        : std::runtime_error(std::string(err_name(code)) + ": " + detail),
          code_(code) {}
    Err code() const { return code_; }
    const char* name() const { return err_name(code_); }

private:
    Err code_;
};

} // namespace hypiso

#endif
