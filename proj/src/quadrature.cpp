#include "qid/quadrature.hpp"

#include <cmath>

namespace qid {

namespace {

using Complex = std::complex<double>;
using Fn = std::function<Complex(double)>;

struct SimpsonState {
    const Fn& f;
    int max_depth;
    double error_estimate = 0.0;
};

Complex recurse(SimpsonState& st, double a, double b, Complex fa, Complex fm, Complex fb,
                Complex whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = st.f(lm);
    const Complex frm = st.f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex delta = left + right - whole;
    // a minimum depth of 2 guards against samples aliasing a periodic integrand
    if ((std::abs(delta) <= 15.0 * tol && depth >= 2) || depth >= st.max_depth) {
        st.error_estimate += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

IntegralResult adaptive_simpson(const Fn& f, double a, double b, const QuadratureSettings& quad) {
    if (a == b) return {};
    // odd panel count: dyadic refinement then never lands on an integer
    // sub-multiple of [a, b], which defeats periodic-integrand aliasing
    constexpr int kPanels = 13;
    SimpsonState st{f, quad.max_depth};
    Complex total{0.0, 0.0};
    const double h = (b - a) / kPanels;
    const double tol = quad.tol / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * h;
        const double hi = (p == kPanels - 1) ? b : a + (p + 1) * h;
        const Complex flo = f(lo);
        const Complex fhi = f(hi);
        const Complex fmid = f(0.5 * (lo + hi));
        const Complex whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += recurse(st, lo, hi, flo, fmid, fhi, whole, tol, 0);
    }
    // convergence is judged by the accumulated estimate: panels that hit the
    // depth cap with a negligible residual (integrable kinks) still count
    return {total, st.error_estimate, st.error_estimate <= 20.0 * quad.tol};
}

double adaptive_simpson_real(const std::function<double(double)>& f, double a, double b,
                             const QuadratureSettings& quad) {
    return adaptive_simpson([&f](double x) { return Complex(f(x), 0.0); }, a, b, quad)
        .value.real();
}

}  // namespace qid
