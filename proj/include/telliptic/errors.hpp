#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace telliptic {

// Base of every exception thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : Error {
    using Error::Error;
};

// Trace within tol of 2 while strict classification was requested.
struct AmbiguousClass : Error {
    explicit AmbiguousClass(double abs_trace)
        : Error("ambiguous element class: |tr| = " + std::to_string(abs_trace) +
                " lies inside the parabolic tolerance band"),
          abs_trace(abs_trace) {}
    double abs_trace;
};

struct NotRegularElliptic : Error {
    using Error::Error;
};

struct DegenerateAngle : Error {
    using Error::Error;
};

struct InvalidPresentation : Error {
    using Error::Error;
};

struct UnknownSymbol : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct WrongGenus : Error {
    using Error::Error;
};

struct InvalidWindow : Error {
    using Error::Error;
};

struct BudgetZero : Error {
    using Error::Error;
};

struct RelationViolated : Error {
    RelationViolated(double residual, double tol)
        : Error("relation residual " + std::to_string(residual) + " exceeds tolerance " +
                std::to_string(tol)),
          residual(residual) {}
    double residual;
};

// Peripheral image j (1-based) is parabolic or hyperbolic.
struct NonEllipticPeripheral : Error {
    explicit NonEllipticPeripheral(int puncture)
        : Error("peripheral image c" + std::to_string(puncture) + " is not regular elliptic"),
          puncture(puncture) {}
    int puncture;
};

// A peripheral or pants-curve image needed by the triangle chain is not regular elliptic.
struct NotRegular : Error {
    explicit NotRegular(std::string curve)
        : Error("image of " + curve + " is not regular elliptic"), curve(std::move(curve)) {}
    std::string curve;
};

struct Infeasible : Error {
    using Error::Error;
};

struct NumericalCollapse : Error {
    using Error::Error;
};

struct OutsideDTBand : Error {
    using Error::Error;
};

// Subset of punctures (1-based, sorted) whose character value is +-1.
struct ConditionViolated : Error {
    explicit ConditionViolated(std::vector<int> subset)
        : Error(describe(subset)), subset(std::move(subset)) {}
    std::vector<int> subset;

private:
    static std::string describe(const std::vector<int>& s) {
        std::string out = "character equals +-1 on subset {";
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (k) out += ",";
            out += std::to_string(s[k]);
        }
        return out + "}";
    }
};

struct NotReduced : Error {
    explicit NotReduced(int puncture)
        : Error("peripheral image c" + std::to_string(puncture) + " is the identity"),
          puncture(puncture) {}
    int puncture;
};

struct IllConditioned : Error {
    IllConditioned(std::string what, double ratio) : Error(std::move(what)), ratio(ratio) {}
    double ratio;
};

}  // namespace telliptic
