#pragma once

#include <stdexcept>
#include <string>

namespace orbiqrr {

/// Base of every domain error. `name()` is the error kind surfaced by the CLI,
/// `module()` the library module that raised it.
class Error : public std::runtime_error {
public:
    Error(std::string name, std::string module, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)), module_(std::move(module)) {}

    const std::string& name() const noexcept { return name_; }
    const std::string& module() const noexcept { return module_; }

private:
    std::string name_;
    std::string module_;
};

#define ORBIQRR_DEFINE_ERROR(Name, Module)                                   \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, Module, what) {} \
    }

// exactalg
ORBIQRR_DEFINE_ERROR(NonUnitConstantTerm, "exactalg");
ORBIQRR_DEFINE_ERROR(NonInvertible, "exactalg");
ORBIQRR_DEFINE_ERROR(PoleAtZero, "exactalg");
ORBIQRR_DEFINE_ERROR(LogObstruction, "exactalg");
ORBIQRR_DEFINE_ERROR(ParseError, "exactalg");

// orbtarget
ORBIQRR_DEFINE_ERROR(InvalidParams, "orbtarget");
ORBIQRR_DEFINE_ERROR(BasisMismatch, "orbtarget");
ORBIQRR_DEFINE_ERROR(IndexOutOfRange, "orbtarget");
ORBIQRR_DEFINE_ERROR(SchemaError, "orbtarget");
ORBIQRR_DEFINE_ERROR(InvariantViolation, "orbtarget");

// giventalspace / loopops
ORBIQRR_DEFINE_ERROR(TruncationTooNarrow, "giventalspace");
ORBIQRR_DEFINE_ERROR(NonUnitTwist, "giventalspace");

// genus0
ORBIQRR_DEFINE_ERROR(NormalFormViolation, "genus0");
ORBIQRR_DEFINE_ERROR(AssumptionViolated, "genus0");
ORBIQRR_DEFINE_ERROR(PositivityViolated, "genus0");
ORBIQRR_DEFINE_ERROR(UnsupportedTarget, "genus0");
ORBIQRR_DEFINE_ERROR(DimensionMismatch, "genus0");
ORBIQRR_DEFINE_ERROR(InsufficientTable, "genus0");

// fockquant
ORBIQRR_DEFINE_ERROR(NotInfinitesimallySymplectic, "fockquant");
ORBIQRR_DEFINE_ERROR(IndexOverflow, "fockquant");

// serre
ORBIQRR_DEFINE_ERROR(CyclotomicOrderTooSmall, "serre");

// cli
ORBIQRR_DEFINE_ERROR(CorruptCache, "cli");

#undef ORBIQRR_DEFINE_ERROR

} // namespace orbiqrr
