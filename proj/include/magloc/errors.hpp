#pragma once

#include <stdexcept>
#include <string>

namespace magloc {

/// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad configuration or scenario input.
struct ConfigError : Error {
    using Error::Error;
};

/// File reading/writing problems.
struct IoError : Error {
    using Error::Error;
};

/// Numerical failure classes. Solvers and the CLI distinguish these from
/// configuration and IO problems via the exit-code mapping.
struct NumericError : Error {
    using Error::Error;
};

struct SingularPointError : NumericError {
    using NumericError::NumericError;
};
struct WindowTooShortError : NumericError {
    using NumericError::NumericError;
};
struct AmbiguousPhaseError : NumericError {
    using NumericError::NumericError;
};
struct DegeneratePairError : NumericError {
    using NumericError::NumericError;
};
struct DegenerateDenominatorError : NumericError {
    using NumericError::NumericError;
};
struct NegativeRadicandError : NumericError {
    using NumericError::NumericError;
};
struct InvalidEnergyError : NumericError {
    using NumericError::NumericError;
};
struct NoCandidateError : NumericError {
    using NumericError::NumericError;
};
struct AmbiguousPoseError : NumericError {
    using NumericError::NumericError;
};
struct DegenerateGeometryError : NumericError {
    using NumericError::NumericError;
};
struct VerticalDirectionError : NumericError {
    using NumericError::NumericError;
};
struct NonFiniteObjectiveError : NumericError {
    using NumericError::NumericError;
};

}  // namespace magloc
