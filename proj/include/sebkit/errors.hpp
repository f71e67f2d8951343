#pragma once

#include <stdexcept>
#include <string>

namespace sebkit {

// Base class for all toolkit failures. `kind()` is a stable machine-readable
// tag; the CLI surfaces it in reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch", m) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& m) : Error("NotHermitian", m) {}
};

struct NumericalFailure : Error {
    explicit NumericalFailure(const std::string& m) : Error("NumericalFailure", m) {}
};

struct NotPSD : Error {
    explicit NotPSD(const std::string& m) : Error("NotPSD", m) {}
};

// Worst commutator pair of a family that was assumed commuting.
struct NotCommutingFamily : Error {
    NotCommutingFamily(std::size_t first, std::size_t second, double residual,
                       const std::string& m)
        : Error("NotCommutingFamily", m), first(first), second(second), residual(residual) {}

    std::size_t first;
    std::size_t second;
    double residual;
};

struct DiagonalizationFailure : Error {
    explicit DiagonalizationFailure(const std::string& m) : Error("DiagonalizationFailure", m) {}
};

struct BadWeights : Error {
    explicit BadWeights(const std::string& m) : Error("BadWeights", m) {}
};

// Kraus operator that is not numerically rank one; carries the offending index
// and the singular-value ratio sigma2/sigma1.
struct NotRankOne : Error {
    NotRankOne(std::size_t index, double ratio, const std::string& m)
        : Error("NotRankOne", m), index(index), ratio(ratio) {}

    std::size_t index;
    double ratio;
};

struct NotPSDInput : Error {
    explicit NotPSDInput(const std::string& m) : Error("NotPSDInput", m) {}
};

struct NotCommutativeRange : Error {
    explicit NotCommutativeRange(const std::string& m) : Error("NotCommutativeRange", m) {}
};

// A constructed object failed its own certificate; carries the violated
// invariant so the failure is actionable.
struct CertificationFailure : Error {
    CertificationFailure(std::string invariant, double residual, const std::string& m)
        : Error("CertificationFailure", m), invariant(std::move(invariant)), residual(residual) {}

    std::string invariant;
    double residual;
};

struct NotSelfAdjoint : Error {
    explicit NotSelfAdjoint(const std::string& m) : Error("NotSelfAdjoint", m) {}
};

struct NotTraceZero : Error {
    explicit NotTraceZero(const std::string& m) : Error("NotTraceZero", m) {}
};

struct NotProjection : Error {
    explicit NotProjection(const std::string& m) : Error("NotProjection", m) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error("ValidationError", m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("IoError", m) {}
};

}  // namespace sebkit
