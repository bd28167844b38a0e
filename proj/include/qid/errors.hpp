#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qid {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario / config text could not be parsed or validated.
struct ParseError : Error {
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
/// Carries the partial value so callers can still inspect it.
struct QuadratureError : Error {
    QuadratureError(const std::string& what, std::complex<double> partial_value,
                    double error_estimate)
        : Error(what), partial(partial_value), estimate(error_estimate) {}

    std::complex<double> partial;
    double estimate;
};

/// A characteristic function vanished where it must not (QID CFs have no zeroes).
struct VanishingCfError : Error {
    using Error::Error;
};

/// Phase unwrapping cannot proceed: consecutive samples differ by >= pi.
struct CoarseGridError : Error {
    CoarseGridError(const std::string& what, double lo, double hi)
        : Error(what), t_lo(lo), t_hi(hi) {}

    double t_lo;
    double t_hi;
};

/// CF inversion did not stabilize; carries the partial CDF value and tail estimate.
struct InversionError : Error {
    InversionError(const std::string& what, double partial_value, double tail_estimate)
        : Error(what), partial(partial_value), tail(tail_estimate) {}

    double partial;
    double tail;
};

}  // namespace qid
