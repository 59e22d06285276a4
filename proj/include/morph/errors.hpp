#pragma once

#include <stdexcept>
#include <string>

namespace morph {

/// Base class for all morphsim errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonSkewInput : Error {
    using Error::Error;
};
struct NonSymmetric : Error {
    using Error::Error;
};
struct SingularInertia : Error {
    using Error::Error;
};
struct InfeasibleParams : Error {
    using Error::Error;
};
struct SingularHessian : Error {
    using Error::Error;
};
struct InadmissibleC : Error {
    using Error::Error;
};
struct NonPositiveW : Error {
    using Error::Error;
};
struct DegenerateThrust : Error {
    using Error::Error;
};
struct DurationTooShort : Error {
    using Error::Error;
};
struct DwellViolation : Error {
    using Error::Error;
};
struct SettlingViolation : Error {
    using Error::Error;
};
struct NotSettled : Error {
    using Error::Error;
};
struct ConfigInvalid : Error {
    using Error::Error;
};
struct NumericalBlowup : Error {
    using Error::Error;
};
struct EstimatorBoundary : Error {
    using Error::Error;
};

}  // namespace morph
