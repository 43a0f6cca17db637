#pragma once

#include <stdexcept>
#include <string>

namespace diracheun {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter and domain errors.
class InvalidParams : public Error {
public:
    using Error::Error;
};

class OutsideDomain : public Error {
public:
    using Error::Error;
};

class DegenerateCase : public Error {
public:
    using Error::Error;
};

class DegenerateGroundState : public Error {
public:
    using Error::Error;
};

/// The requested level has no normalizable solution in the requested parity sector.
class NoBoundState : public Error {
public:
    using Error::Error;
};

class ZeroNorm : public Error {
public:
    using Error::Error;
};

class CalibrationFailure : public Error {
public:
    using Error::Error;
};

// Numerical failures. These map to the "non-convergence" exit code of the CLI.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class NoConvergence : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class StepFailure : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class Overflow : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class NoBracket : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class MaxIterations : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

} // namespace diracheun
