#pragma once

#include <stdexcept>
#include <string>

namespace qa {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

struct SyntaxError : Error {
    std::size_t position;
    SyntaxError(const std::string& what, std::size_t pos)
        : Error("syntax error at " + std::to_string(pos) + ": " + what), position(pos) {}
};

struct UnknownSymbol : Error {
    std::string symbol;
    explicit UnknownSymbol(const std::string& s) : Error("unknown symbol '" + s + "'"), symbol(s) {}
};

struct SpecializationPole : Error {
    SpecializationPole() : Error("denominator vanishes under specialization") {}
};

struct InadmissibleQ : Error {
    InadmissibleQ() : Error("q must not be specialized to 0, 1 or -1") {}
};

struct InvalidParamSet : Error {
    using Error::Error;
};

struct InvalidAutomorphism : Error {
    using Error::Error;
};

struct NotAWeightVector : Error {
    NotAWeightVector() : Error("monomial containing y is not a weight vector when t is nonzero") {}
};

struct ShapeMismatch : Error {
    ShapeMismatch() : Error("weight matrices have different shapes") {}
};

struct BranchExplosion : Error {
    std::string series;
    BranchExplosion(const std::string& s, std::size_t limit)
        : Error("branch limit " + std::to_string(limit) + " exceeded in series " + s), series(s) {}
};

struct UnresolvedCondition : Error {
    using Error::Error;
};

struct UnclassifiedStructure : Error {
    UnclassifiedStructure() : Error("structure lies outside the classified families") {}
};

struct PreconditionFailed : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

}  // namespace qa
