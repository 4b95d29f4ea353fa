#pragma once

#include <stdexcept>
#include <string>

namespace logspring {

/// Bad arguments, violated preconditions, malformed input. CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Nonpositive time, parameter outside its admissible range.
class DomainError : public InputError {
public:
    using InputError::InputError;
};

/// A formula was called outside the case it is stated for (e.g. x1 != 0).
class PreconditionError : public InputError {
public:
    using InputError::InputError;
};

/// Time outside the sign-validity window of an economic configuration.
class WindowError : public InputError {
public:
    using InputError::InputError;
};

class ConstructionError : public InputError {
public:
    using InputError::InputError;
};

class InsufficientDataError : public InputError {
public:
    using InputError::InputError;
};

/// Failures of a numerical procedure on valid input. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Step-size underflow or step budget exhausted.
class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Mass or stiffness schedule became nonpositive or inconsistent.
class ScheduleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Economic coefficients do not map onto a log-periodic oscillator.
class MappingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The log-periodic fit could not be carried out. CLI exit code 4.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace logspring
