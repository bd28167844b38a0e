#pragma once

#include <complex>
#include <vector>

#include "qid/fourier.hpp"
#include "qid/piecewise_bv.hpp"
#include "qid/quadrature.hpp"

namespace qid {

/// Spectral pair (gamma, G) with the centering scale tau of the
/// sin(tau x)/tau centering convention. tau must be positive.
struct SpectralPair {
    double gamma = 0.0;
    PiecewiseBV g;
    double tau = 1.0;

    bool operator==(const SpectralPair&) const = default;
};

/// Piecewise-linear function given by its values at sorted breakpoints,
/// affine in between and identically zero outside [front, back].
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double eval(double s) const;
};

/// Lemma-1 building blocks for the kernel at fixed (t, tau):
/// the kernel equals the FS transform (in x) of W = U + V, where dV = rho ds.
struct LemmaKernelParts {
    PiecewiseBV u;             // four atoms (merged if coincident)
    PiecewiseLinear rho;       // continuous broken-line density of V
    PiecewiseBV v;             // refined piecewise-linear approximation of V
    PiecewiseBV w;             // U + V
    double support_bound = 0.0;  // max(|t|, tau)
};

/// Levy-Khinchine integrand (e^{itx} - 1 - (it/tau) sin(tau x)) (1+x^2)/x^2.
/// Continuity value -t^2/2 at x = 0; series evaluation for |x| < 1e-4.
std::complex<double> kernel(double t, double x, double tau);

/// Real part of the kernel, (cos(tx) - 1)(1+x^2)/x^2, in a cancellation-free form.
double kernel_real(double t, double x);

std::complex<double> log_cf(const SpectralPair& pair, double t, const QuadratureSettings& quad = {});
std::complex<double> cf(const SpectralPair& pair, double t, const QuadratureSettings& quad = {});

/// A ready-to-sample CF evaluator for the pair.
CfEvaluator cf_evaluator(const SpectralPair& pair, const QuadratureSettings& quad = {});

LemmaKernelParts lemma_parts(double t, double tau);

/// Kernel evaluated through Lemma 1: FS transform of U plus the exact
/// integral of e^{isx} against the broken-line density rho.
std::complex<double> kernel_via_w(double t, double x, double tau);

/// Im(Ln f(tau))/tau; exact for QID CFs (the kernel at t = tau is real).
double recover_gamma(const CfEvaluator& f, double tau, double step = 0.01);
double recover_gamma(const TransformSamples& samples, double tau);

/// Second difference of the distinguished log:
/// psi(t, s) = Ln f(t) - (Ln f(t-s) + Ln f(t+s))/2.
std::complex<double> psi(const DistinguishedLog& log_f, double t, double s);
std::complex<double> psi(const CfEvaluator& f, double t, double s);

struct SpectralTransformSettings {
    QuadratureSettings quad{1e-8, 40};
    double s_max = 40.0;  // tail bound B0 (s^2/2 + 1) e^{-s} beyond here
};

struct SpectralTransformResult {
    std::complex<double> value{0.0, 0.0};
    double truncation_bound = 0.0;
};

/// Int_0^inf psi(t, s) e^{-s} ds; equals the FS transform of the spectral
/// function of f when f is QID.
SpectralTransformResult recover_spectral_transform(const DistinguishedLog& log_f, double t,
                                                   const SpectralTransformSettings& settings = {});
SpectralTransformResult recover_spectral_transform(const CfEvaluator& f, double t,
                                                   const SpectralTransformSettings& settings = {});

/// Khinchine functional chi_delta(f) = -(1/delta) Int_0^delta ln|f(s)| ds.
/// Throws VanishingCfError if f vanishes on [0, delta].
double khinchine_functional(const CfEvaluator& f, double delta, const QuadratureSettings& quad = {});

/// The sinc kernel (1 - sin(delta x)/(delta x)) (1+x^2)/x^2 with the
/// delta^2/6 convention at x = 0.
double sinc_kernel(double delta, double x);

/// Int sinc_kernel dG; equals chi_delta(cf of the pair) for QID pairs.
double chi_identity_rhs(const PiecewiseBV& g, double delta, const QuadratureSettings& quad = {});

struct KernelBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Numerical inf/sup of the sinc kernel over a log-spaced grid together with
/// the x -> 0 value delta^2/6 and the |x| -> inf limit 1.
KernelBounds sinc_kernel_bounds(double delta);

/// Scenario helper: the atomic Levy-measure mapping dG = x^2/(1+x^2) dnu with
/// gamma chosen so the sin-centerings cancel, i.e.
/// log f(t) = sum_j rate_j (e^{i t x_j} - 1). Locations must be nonzero.
SpectralPair compound_poisson_pair(const std::vector<std::pair<double, double>>& jumps,
                                   double tau = 1.0, double extra_gamma = 0.0);

}  // namespace qid
