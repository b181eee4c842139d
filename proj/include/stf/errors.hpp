#pragma once

#include <stdexcept>
#include <string>

namespace stf {

// Base of every library failure. kind() is the stable name used in reports
// and by the CLI exit-code policy.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what, bool input_error)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), input_(input_error) {}
    const std::string& kind() const { return kind_; }
    bool is_input_error() const { return input_; }

private:
    std::string kind_;
    bool input_;
};

#define STF_ERROR(Name, input)                                                  \
    struct Name : Error {                                                       \
        explicit Name(const std::string& w) : Error(#Name, w, input) {}         \
    };

// input / catalog problems (CLI exit 2)
STF_ERROR(InputError, true)
STF_ERROR(UnsupportedCartanType, true)
STF_ERROR(SchemaError, true)
STF_ERROR(BrokenReference, true)
STF_ERROR(UnknownLevi, true)
STF_ERROR(DomainMismatch, true)

// computation failures (CLI exit 1)
STF_ERROR(SingularPoint, false)
STF_ERROR(MinusOneRequired, false)
STF_ERROR(InternalAxiomConflict, false)
STF_ERROR(UniquenessFailure, false)
STF_ERROR(NotElliptic, false)
STF_ERROR(IncompleteCatalog, false)
STF_ERROR(UnsupportedForQuadrature, false)
STF_ERROR(InvalidPacket, true)
STF_ERROR(AdjointRelationFailure, false)
STF_ERROR(CoefficientRelationFailure, false)
STF_ERROR(RequiresSemisimple, false)
STF_ERROR(RegularityRequired, false)
STF_ERROR(NotDiscreteSeries, false)
STF_ERROR(RouteMismatch, false)
STF_ERROR(IncompleteArithmeticData, false)
STF_ERROR(NonIntegralMultiplicity, false)
STF_ERROR(StabilizationInconsistency, false)
STF_ERROR(LefschetzInconsistency, false)

#undef STF_ERROR

}  // namespace stf
