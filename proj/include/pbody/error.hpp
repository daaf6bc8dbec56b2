#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pbody {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NotFullDimensional,
    NotPointed,
    NotTruncating,
    Unbounded,
    DimensionTooLarge,
    SingularBasis,
    RayNotInLattice,
    NotPrimary,
    BoundTooSmall,
    GeneratorOutsideSemigroup,
    EmptyGenerators,
    PointOutsideSemigroup,
    DimensionNotTwo,
    BoundExhausted,
    BoxTooLarge,
    ParseError,
    ValidationError,
    CacheCorrupt,
    Overflow,
};

std::string_view kind_name(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can embed it in per-task reports.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace pbody
