#pragma once

#include <stdexcept>
#include <string>

namespace rook {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// galois
struct NotPrime : Error {
    using Error::Error;
};
struct DegreeTooLarge : Error {
    using Error::Error;
};
struct DivisionByZero : Error {
    using Error::Error;
};
struct FieldMismatch : Error {
    using Error::Error;
};

// function_field
struct NotSquareFree : Error {
    using Error::Error;
};
struct EvenDegreeUnsupported : Error {
    using Error::Error;
};
struct CharacteristicTwoHyperelliptic : Error {
    using Error::Error;
};
struct BadHermitianField : Error {
    using Error::Error;
};
struct UnsupportedPrimitive : Error {
    using Error::Error;
};
struct UnsupportedPlace : Error {
    using Error::Error;
};
struct IndeterminateForm : Error {
    using Error::Error;
};

// schemes
struct NotEnoughPlaces : Error {
    using Error::Error;
};
struct RookConditionViolated : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};
struct RankMismatch : Error {
    using Error::Error;
};

struct InsufficientResponses : Error {
    int rank_achieved;
    int rank_full;
    InsufficientResponses(const std::string& what, int achieved, int full)
        : Error(what), rank_achieved(achieved), rank_full(full) {}
};
struct InconsistentResponses : Error {
    using Error::Error;
};

// search / config
struct SearchSpaceTooLarge : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace rook
