#pragma once

#include <stdexcept>
#include <string>

namespace curvekit {

// Base class for all library errors. InputError covers malformed user input
// (unknown families, bad parameters, unparsable files); NumericError covers
// violated numerical preconditions and invariants detected while computing.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class InputError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

#define CURVEKIT_INPUT_ERROR(NAME)                                        \
    class NAME : public InputError {                                      \
    public:                                                               \
        explicit NAME(const std::string& what) : InputError(#NAME, what) {} \
    }

#define CURVEKIT_NUMERIC_ERROR(NAME)                                        \
    class NAME : public NumericError {                                      \
    public:                                                                 \
        explicit NAME(const std::string& what) : NumericError(#NAME, what) {} \
    }

CURVEKIT_INPUT_ERROR(UnknownFamily);
CURVEKIT_INPUT_ERROR(ParamOutOfRange);
CURVEKIT_INPUT_ERROR(ParseError);

CURVEKIT_NUMERIC_ERROR(InvariantViolation);
CURVEKIT_NUMERIC_ERROR(DegenerateInput);
CURVEKIT_NUMERIC_ERROR(DuplicatePoints);
CURVEKIT_NUMERIC_ERROR(VanishingCurvature);
CURVEKIT_NUMERIC_ERROR(StepTooLarge);
CURVEKIT_NUMERIC_ERROR(NonPositiveCurvature);
CURVEKIT_NUMERIC_ERROR(CurvatureVanishes);
CURVEKIT_NUMERIC_ERROR(OutOfDomain);
CURVEKIT_NUMERIC_ERROR(DomainMismatch);
CURVEKIT_NUMERIC_ERROR(NotApplicable);
CURVEKIT_NUMERIC_ERROR(DivideByZero);
CURVEKIT_NUMERIC_ERROR(DegeneratePartner);
CURVEKIT_NUMERIC_ERROR(SingularOffset);
CURVEKIT_NUMERIC_ERROR(VTooLarge);
CURVEKIT_NUMERIC_ERROR(NotSpherical);
CURVEKIT_NUMERIC_ERROR(CurvatureSignChange);

#undef CURVEKIT_INPUT_ERROR
#undef CURVEKIT_NUMERIC_ERROR

} // namespace curvekit
