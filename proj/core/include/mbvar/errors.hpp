#pragma once

#include <stdexcept>
#include <string>

namespace mbvar {

// Base class for every domain error the engine raises.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- tape ingestion ----
struct MalformedRecord : Error { using Error::Error; };
struct NonPositiveVolume : Error { using Error::Error; };
struct NonPositiveValue : Error { using Error::Error; };
struct PriceInconsistent : Error { using Error::Error; };
struct EmptyTape : Error { using Error::Error; };
struct EmptyWindow : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };

// ---- moments ----
struct OrderOverflow : Error { using Error::Error; };
struct NegativeVariance : Error {
    NegativeVariance(const std::string& msg, double variance)
        : Error(msg), variance(variance) {}
    double variance;
};

// ---- characteristic function ----
struct NonPositiveVariance : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };
struct OrderExceedsFit : Error { using Error::Error; };
struct PointMassUnsupported : Error { using Error::Error; };
struct QuadratureFailure : Error {
    QuadratureFailure(const std::string& msg, double error_estimate)
        : Error(msg), error_estimate(error_estimate) {}
    double error_estimate;
};

// ---- quantile extraction ----
struct BracketFailure : Error { using Error::Error; };

}  // namespace mbvar
