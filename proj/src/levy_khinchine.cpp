#include "qid/levy_khinchine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qid/errors.hpp"

namespace qid {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

void require_positive_tau(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
}

}  // namespace

double kernel_real(double t, double x) {
    if (x == 0.0) return -0.5 * t * t;
    if (std::abs(x) < 1e-4) {
        const double t2 = t * t;
        // (cos(tx)-1)(1+x^2)/x^2 = -t^2/2 + x^2 (t^4/24 - t^2/2) + O(x^4)
        return -0.5 * t2 + x * x * (t2 * t2 / 24.0 - 0.5 * t2);
    }
    const double s = std::sin(0.5 * t * x);
    return -2.0 * s * s * (1.0 + x * x) / (x * x);
}

std::complex<double> kernel(double t, double x, double tau) {
    require_positive_tau(tau);
    if (t == 0.0) return {0.0, 0.0};
    if (x == 0.0) return {-0.5 * t * t, 0.0};
    if (std::abs(x) < 1e-4) {
        const double t2 = t * t;
        const double tau2 = tau * tau;
        const double re = -0.5 * t2 + x * x * (t2 * t2 / 24.0 - 0.5 * t2);
        // odd part: -t x (t^2 - tau^2)/6 + t x^3 ((t^4 - tau^4)/120 - (t^2 - tau^2)/6)
        const double im = -t * x * (t2 - tau2) / 6.0 +
                          t * x * x * x * ((t2 * t2 - tau2 * tau2) / 120.0 - (t2 - tau2) / 6.0);
        return {re, im};
    }
    const double w = (1.0 + x * x) / (x * x);
    const double s = std::sin(0.5 * t * x);
    const double re = -2.0 * s * s * w;
    const double im = (std::sin(t * x) - (t / tau) * std::sin(tau * x)) * w;
    return {re, im};
}

std::complex<double> log_cf(const SpectralPair& pair, double t, const QuadratureSettings& quad) {
    require_positive_tau(pair.tau);
    const double tau = pair.tau;
    const IntegralResult integral = stieltjes_integral(
        pair.g, [t, tau](double x) { return kernel(t, x, tau); }, quad);
    return kI * (pair.gamma * t) + integral.value;
}

std::complex<double> cf(const SpectralPair& pair, double t, const QuadratureSettings& quad) {
    return std::exp(log_cf(pair, t, quad));
}

CfEvaluator cf_evaluator(const SpectralPair& pair, const QuadratureSettings& quad) {
    return [pair, quad](double t) { return cf(pair, t, quad); };
}

double PiecewiseLinear::eval(double s) const {
    if (breakpoints.empty()) return 0.0;
    if (s <= breakpoints.front() || s >= breakpoints.back()) {
        // continuous and vanishing outside the breakpoint hull
        if (s == breakpoints.front()) return values.front();
        if (s == breakpoints.back()) return values.back();
        return 0.0;
    }
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    const double lo = breakpoints[k];
    const double hi = breakpoints[k + 1];
    const double u = (s - lo) / (hi - lo);
    return values[k] + u * (values[k + 1] - values[k]);
}

namespace {

double rho_formula(double t, double tau, double s) {
    return -0.5 * (std::abs(s - t) - std::abs(s) -
                   (t / (2.0 * tau)) * (std::abs(s - tau) - std::abs(s + tau)));
}

/// Exact integral of e^{isx} rho(s) ds for the broken-line rho. Below
/// |x| * span ~ 1e-2 the antiderivative form cancels badly, so a moment
/// series takes over there (truncation ~ (x s)^6 / 6!).
Complex rho_transform(const PiecewiseLinear& rho, double x) {
    if (rho.breakpoints.size() < 2) return {0.0, 0.0};
    const double span =
        std::max(std::abs(rho.breakpoints.front()), std::abs(rho.breakpoints.back()));
    if (std::abs(x) * span <= 1e-2) {
        double moments[6] = {0, 0, 0, 0, 0, 0};
        for (std::size_t k = 0; k + 1 < rho.breakpoints.size(); ++k) {
            const double a = rho.breakpoints[k];
            const double b = rho.breakpoints[k + 1];
            const double va = rho.values[k];
            const double vb = rho.values[k + 1];
            // rho(s) = c0 + c1 s on the piece
            const double c1 = (vb - va) / (b - a);
            const double c0 = (va * b - vb * a) / (b - a);
            double pa = a, pb = b;  // running powers a^{j+1}, b^{j+1}
            for (int j = 0; j < 6; ++j) {
                const double ij = (pb - pa) / (j + 1);  // int s^j
                pa *= a;
                pb *= b;
                const double ij1 = (pb - pa) / (j + 2);  // int s^{j+1}
                moments[j] += c0 * ij + c1 * ij1;
            }
        }
        Complex total{0.0, 0.0};
        Complex pow_ix{1.0, 0.0};
        double factorial = 1.0;
        for (int j = 0; j < 6; ++j) {
            total += pow_ix / factorial * moments[j];
            pow_ix *= kI * x;
            factorial *= (j + 1);
        }
        return total;
    }
    Complex total{0.0, 0.0};
    for (std::size_t k = 0; k + 1 < rho.breakpoints.size(); ++k) {
        const double a = rho.breakpoints[k];
        const double b = rho.breakpoints[k + 1];
        const double va = rho.values[k];
        const double vb = rho.values[k + 1];
        const double beta = (vb - va) / (b - a);
        // int_a^b e^{isx} (va + beta (s-a)) ds
        //   = [e^{isx} ((va + beta (s-a))/(ix) + beta/x^2)]_a^b
        const Complex ea = std::polar(1.0, a * x);
        const Complex eb = std::polar(1.0, b * x);
        const Complex inv_ix = 1.0 / (kI * x);
        total += eb * (vb * inv_ix + beta / (x * x)) - ea * (va * inv_ix + beta / (x * x));
    }
    return total;
}

}  // namespace

LemmaKernelParts lemma_parts(double t, double tau) {
    require_positive_tau(tau);
    LemmaKernelParts parts;
    parts.support_bound = std::max(std::abs(t), tau);

    parts.u = PiecewiseBV({{t, 1.0},
                           {0.0, -1.0},
                           {tau, -t / (2.0 * tau)},
                           {-tau, t / (2.0 * tau)}},
                          {});

    std::vector<double> bp{-tau, 0.0, t, tau};
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    parts.rho.breakpoints = bp;
    parts.rho.values.reserve(bp.size());
    for (double s : bp) parts.rho.values.push_back(rho_formula(t, tau, s));

    // V stored on a refined mesh: 64 piecewise-constant density subsegments
    // per rho piece (midpoint slopes keep V exact at mesh nodes).
    std::vector<Segment> v_segments;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        const double a = bp[k];
        const double b = bp[k + 1];
        const double h = (b - a) / 64.0;
        for (int j = 0; j < 64; ++j) {
            const double lo = a + j * h;
            const double hi = (j == 63) ? b : a + (j + 1) * h;
            const double slope = parts.rho.eval(0.5 * (lo + hi));
            if (slope != 0.0) v_segments.push_back({lo, hi, slope});
        }
    }
    parts.v = PiecewiseBV({}, std::move(v_segments));
    parts.w = combine(1.0, parts.u, 1.0, parts.v);
    return parts;
}

std::complex<double> kernel_via_w(double t, double x, double tau) {
    const LemmaKernelParts parts = lemma_parts(t, tau);
    return fs_transform(parts.u, x) + rho_transform(parts.rho, x);
}

double recover_gamma(const CfEvaluator& f, double tau, double step) {
    require_positive_tau(tau);
    const DistinguishedLog log_f(f, 0.0, tau, step);
    return log_f(tau).imag() / tau;
}

double recover_gamma(const TransformSamples& samples, double tau) {
    require_positive_tau(tau);
    const TransformSamples logs = distinguished_log(samples);
    const auto it = std::lower_bound(logs.grid.begin(), logs.grid.end(), tau);
    if (it == logs.grid.end() || *it != tau) {
        throw std::invalid_argument("recover_gamma: samples grid must contain t = tau");
    }
    return logs.values[static_cast<std::size_t>(it - logs.grid.begin())].imag() / tau;
}

std::complex<double> psi(const DistinguishedLog& log_f, double t, double s) {
    if (s == 0.0) return {0.0, 0.0};
    return log_f(t) - 0.5 * (log_f(t - s) + log_f(t + s));
}

std::complex<double> psi(const CfEvaluator& f, double t, double s) {
    const double reach = std::abs(t) + std::abs(s) + 1e-9;
    const DistinguishedLog log_f(f, -reach, reach);
    return psi(log_f, t, s);
}

SpectralTransformResult recover_spectral_transform(const DistinguishedLog& log_f, double t,
                                                   const SpectralTransformSettings& settings) {
    const double s_max = settings.s_max;
    auto integrand = [&](double s) { return psi(log_f, t, s) * std::exp(-s); };
    const IntegralResult integral = adaptive_simpson(integrand, 0.0, s_max, settings.quad);
    if (!integral.converged) {
        throw QuadratureError("recover_spectral_transform: s-quadrature did not converge",
                              integral.value, integral.error_estimate);
    }
    // |psi(t, s)| <= B0 (s^2/2 + 1): estimate B0 from sampled values
    double b0 = 0.0;
    for (double s : {1.0, 2.0, 5.0, 10.0, 20.0, s_max}) {
        b0 = std::max(b0, std::abs(psi(log_f, t, s)) / (0.5 * s * s + 1.0));
    }
    const double tail =
        b0 * std::exp(-s_max) * (0.5 * (s_max * s_max + 2.0 * s_max + 2.0) + 1.0);
    return {integral.value, tail};
}

SpectralTransformResult recover_spectral_transform(const CfEvaluator& f, double t,
                                                   const SpectralTransformSettings& settings) {
    const double reach = std::abs(t) + settings.s_max + 1e-9;
    const DistinguishedLog log_f(f, -reach, reach);
    return recover_spectral_transform(log_f, t, settings);
}

double khinchine_functional(const CfEvaluator& f, double delta, const QuadratureSettings& quad) {
    if (!(delta > 0.0)) throw std::invalid_argument("khinchine_functional: delta must be positive");
    auto integrand = [&](double s) {
        const double m = std::abs(f(s));
        if (m == 0.0) {
            std::ostringstream os;
            os << "khinchine_functional: CF vanishes at s = " << s
               << "; choose a smaller delta";
            throw VanishingCfError(os.str());
        }
        return std::log(m);
    };
    return -adaptive_simpson_real(integrand, 0.0, delta, quad) / delta;
}

double sinc_kernel(double delta, double x) {
    if (!(delta > 0.0)) throw std::invalid_argument("sinc_kernel: delta must be positive");
    const double u = delta * x;
    // (1 - sin(u)/u) (1+x^2)/x^2 = S(u) delta^2 (1+x^2), S(u) = (1 - sinc u)/u^2
    double s_of_u;
    if (std::abs(u) < 0.5) {
        const double u2 = u * u;
        s_of_u = 1.0 / 6.0 - u2 / 120.0 + u2 * u2 / 5040.0 - u2 * u2 * u2 / 362880.0;
    } else {
        s_of_u = (1.0 - std::sin(u) / u) / (u * u);
    }
    return s_of_u * delta * delta * (1.0 + x * x);
}

double chi_identity_rhs(const PiecewiseBV& g, double delta, const QuadratureSettings& quad) {
    return stieltjes_integral_real(
        g, [delta](double x) { return sinc_kernel(delta, x); }, quad);
}

KernelBounds sinc_kernel_bounds(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("sinc_kernel_bounds: delta must be positive");
    double lo = std::min(delta * delta / 6.0, 1.0);  // x -> 0 value and |x| -> inf limit
    double hi = std::max(delta * delta / 6.0, 1.0);
    // kernel is even in x: scan a positive log-spaced grid
    const int per_decade = 400;
    for (int i = -6 * per_decade; i <= 6 * per_decade; ++i) {
        const double x = std::pow(10.0, static_cast<double>(i) / per_decade);
        const double v = sinc_kernel(delta, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

SpectralPair compound_poisson_pair(const std::vector<std::pair<double, double>>& jumps,
                                   double tau, double extra_gamma) {
    require_positive_tau(tau);
    std::vector<Atom> atoms;
    double gamma = extra_gamma;
    for (const auto& [location, rate] : jumps) {
        if (location == 0.0) {
            throw std::invalid_argument("compound_poisson_pair: jump location must be nonzero");
        }
        const double x2 = location * location;
        atoms.push_back({location, rate * x2 / (1.0 + x2)});
        gamma += rate * std::sin(tau * location) / tau;
    }
    return {gamma, PiecewiseBV(std::move(atoms), {}), tau};
}

}  // namespace qid
