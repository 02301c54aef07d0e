#pragma once

#include <stdexcept>
#include <string>

namespace qsc {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A half-shuffle or bracket received an operand containing the empty word.
struct UnitOperand : Error {
    using Error::Error;
};

// Two paths combined in one expression live on different grids.
struct GridMismatch : Error {
    using Error::Error;
};

// Matrix dimensions of two operands disagree.
struct DimMismatch : Error {
    using Error::Error;
};

// Sequence lengths or dimensions of two Rota-Baxter operands disagree.
struct ShapeMismatch : Error {
    using Error::Error;
};

// A weight-1 construction was given an operator of a different weight.
struct WrongWeight : Error {
    using Error::Error;
};

// An operation restricted to jump-free paths saw flagged jump steps.
struct JumpsPresent : Error {
    using Error::Error;
};

// A backend failed the triple-bracket vanishing test.
struct NotRegular : Error {
    using Error::Error;
};

// A polynomial logarithm did not collapse to a degree-one element.
struct NotPrimitive : Error {
    using Error::Error;
};

// An axiom id is not present in the catalog.
struct UnknownCheckId : Error {
    using Error::Error;
};

}  // namespace qsc
