#pragma once

#include <complex>
#include <functional>

namespace qid {

struct QuadratureSettings {
    double tol = 1e-10;
    int max_depth = 40;
};

struct IntegralResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    bool converged = true;
};

/// Adaptive Simpson integration of a complex-valued function on [a, b].
/// Never throws on non-convergence; the caller decides what a failed
/// `converged` flag means for its own contract.
IntegralResult adaptive_simpson(const std::function<std::complex<double>(double)>& f,
                                double a, double b, const QuadratureSettings& quad = {});

/// Real-valued convenience wrapper.
double adaptive_simpson_real(const std::function<double(double)>& f, double a, double b,
                             const QuadratureSettings& quad = {});

}  // namespace qid
