#pragma once

#include <stdexcept>
#include <string>

namespace mrpke {

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("inverse of zero field element") {}
};

struct DependentPoints : std::invalid_argument {
    DependentPoints() : std::invalid_argument("interpolation points are GF(2)-dependent") {}
};

// Rejection cap hit or an internal consistency check failed.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Carries no detail about the plaintext or the residual error.
struct DecryptError : std::runtime_error {
    DecryptError() : std::runtime_error("decryption failed") {}
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidReduction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoLinearization : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSeries : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooLarge : std::length_error {
    using std::length_error::length_error;
};

} // namespace mrpke
