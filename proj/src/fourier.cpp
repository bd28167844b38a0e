#include "qid/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qid/errors.hpp"

namespace qid {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double principal_arg_ratio(Complex num, Complex den) {
    // arg(num/den) without the division, robust for tiny magnitudes
    const Complex r = num * std::conj(den);
    return std::atan2(r.imag(), r.real());
}

}  // namespace

TransformSamples::TransformSamples(std::vector<double> g, std::vector<Complex> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (grid.size() != values.size()) {
        throw std::invalid_argument("TransformSamples: grid/value size mismatch");
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i] < grid[i + 1])) {
            throw std::invalid_argument("TransformSamples: grid not strictly increasing");
        }
    }
    index_of_zero();  // throws when 0 is absent
}

std::size_t TransformSamples::index_of_zero() const {
    const auto it = std::lower_bound(grid.begin(), grid.end(), 0.0);
    if (it == grid.end() || *it != 0.0) {
        throw std::invalid_argument("TransformSamples: grid must contain t = 0");
    }
    return static_cast<std::size_t>(it - grid.begin());
}

std::vector<double> symmetric_grid(double t_max, double step) {
    const long n = std::lround(t_max / step);
    std::vector<double> grid;
    grid.reserve(2 * n + 1);
    for (long i = -n; i <= n; ++i) grid.push_back(static_cast<double>(i) * step);
    return grid;
}

const std::vector<double>& default_t_grid() {
    static const std::vector<double> grid = symmetric_grid(40.0, 0.01);
    return grid;
}

std::complex<double> fs_transform(const PiecewiseBV& g, double t) {
    if (t == 0.0) return {g.limit_at_infinity(), 0.0};
    Complex value{0.0, 0.0};
    for (const Atom& a : g.atoms()) {
        value += a.weight * std::polar(1.0, t * a.location);
    }
    for (const Segment& s : g.segments()) {
        // slope * (e^{itb} - e^{ita})/(it) = slope * e^{it(a+b)/2} * 2 sin(t(b-a)/2)/t
        const double mid = 0.5 * (s.left + s.right);
        const double half = 0.5 * (s.right - s.left);
        value += s.slope * std::polar(1.0, t * mid) * (2.0 * std::sin(t * half) / t);
    }
    return value;
}

TransformSamples sample_fs(const PiecewiseBV& g, const std::vector<double>& grid) {
    std::vector<Complex> values;
    values.reserve(grid.size());
    for (double t : grid) values.push_back(fs_transform(g, t));
    return TransformSamples(grid, std::move(values));
}

TransformSamples sample_cf(const CfEvaluator& f, const std::vector<double>& grid) {
    std::vector<Complex> values;
    values.reserve(grid.size());
    for (double t : grid) values.push_back(f(t));
    return TransformSamples(grid, std::move(values));
}

TransformSamples distinguished_log(const TransformSamples& samples) {
    const std::size_t zero = samples.index_of_zero();
    const std::size_t n = samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (samples.values[i] == Complex(0.0, 0.0)) {
            std::ostringstream os;
            os << "distinguished_log: vanishing CF at t = " << samples.grid[i]
               << " (not a QID characteristic function)";
            throw VanishingCfError(os.str());
        }
    }
    std::vector<double> theta(n, 0.0);
    auto unwrap_step = [&](std::size_t from, std::size_t to) {
        const double d = principal_arg_ratio(samples.values[to], samples.values[from]);
        if (std::abs(d) >= kPi - 1e-9) {
            std::ostringstream os;
            os << "distinguished_log: grid too coarse on [" << samples.grid[from] << ", "
               << samples.grid[to] << "] (phase increment " << d << ")";
            throw CoarseGridError(os.str(), samples.grid[from], samples.grid[to]);
        }
        theta[to] = theta[from] + d;
    };
    for (std::size_t i = zero; i + 1 < n; ++i) unwrap_step(i, i + 1);
    for (std::size_t i = zero; i > 0; --i) unwrap_step(i, i - 1);

    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = Complex(std::log(std::abs(samples.values[i])), theta[i]);
    }
    return TransformSamples(samples.grid, std::move(out));
}

DistinguishedLog::DistinguishedLog(CfEvaluator f, double t_min, double t_max, double step)
    : f_(std::move(f)) {
    if (!(t_min <= 0.0 && 0.0 <= t_max) || !(step > 0.0)) {
        throw std::invalid_argument("DistinguishedLog: need t_min <= 0 <= t_max, step > 0");
    }
    auto value_at = [this](double t) {
        const Complex v = f_(t);
        if (v == Complex(0.0, 0.0) || !std::isfinite(std::abs(v))) {
            std::ostringstream os;
            os << "DistinguishedLog: CF vanishes (or is not finite) at t = " << t;
            throw VanishingCfError(os.str());
        }
        return v;
    };

    // Walk outward from 0 in both directions; densify an interval tenfold
    // (up to three levels) whenever the increment approaches pi/2.
    auto extend = [&](double direction, double bound) {
        double t = 0.0;
        Complex v = value_at(0.0);
        double theta = 0.0;
        while (direction * (bound - t) > 1e-15) {
            double next = t + direction * step;
            if (direction * (bound - next) < 0.0) next = bound;
            double lo = t;
            Complex lo_v = v;
            double sub = next - t;
            int level = 0;
            while (true) {
                const Complex hi_v = f_(lo + sub);
                const double d = principal_arg_ratio(hi_v, lo_v);
                if (std::abs(d) < kPi / 2.0 || level >= 3) break;
                sub /= 10.0;
                ++level;
            }
            // emit refined nodes until we reach `next`
            while (direction * (next - lo) > 1e-15) {
                double hi = lo + sub;
                if (direction * (next - hi) < 0.0) hi = next;
                const Complex hi_v = value_at(hi);
                const double d = principal_arg_ratio(hi_v, lo_v);
                if (std::abs(d) >= kPi - 1e-9) {
                    std::ostringstream os;
                    os << "DistinguishedLog: grid too coarse on [" << lo << ", " << hi
                       << "] (phase increment " << d << ")";
                    throw CoarseGridError(os.str(), lo, hi);
                }
                theta += d;
                nodes_t_.push_back(hi);
                nodes_theta_.push_back(theta);
                nodes_value_.push_back(hi_v);
                lo = hi;
                lo_v = hi_v;
            }
            t = next;
            v = lo_v;
        }
    };

    nodes_t_.push_back(0.0);
    nodes_theta_.push_back(0.0);
    nodes_value_.push_back(value_at(0.0));
    extend(+1.0, t_max);
    extend(-1.0, t_min);

    // sort the combined node table
    std::vector<std::size_t> order(nodes_t_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [this](std::size_t a, std::size_t b) { return nodes_t_[a] < nodes_t_[b]; });
    std::vector<double> ts, thetas;
    std::vector<Complex> vs;
    ts.reserve(order.size());
    thetas.reserve(order.size());
    vs.reserve(order.size());
    for (std::size_t i : order) {
        ts.push_back(nodes_t_[i]);
        thetas.push_back(nodes_theta_[i]);
        vs.push_back(nodes_value_[i]);
    }
    nodes_t_ = std::move(ts);
    nodes_theta_ = std::move(thetas);
    nodes_value_ = std::move(vs);
}

std::complex<double> DistinguishedLog::operator()(double t) const {
    if (t < nodes_t_.front() - 1e-12 || t > nodes_t_.back() + 1e-12) {
        std::ostringstream os;
        os << "DistinguishedLog: t = " << t << " outside tabulated range [" << nodes_t_.front()
           << ", " << nodes_t_.back() << "]";
        throw std::out_of_range(os.str());
    }
    auto it = std::upper_bound(nodes_t_.begin(), nodes_t_.end(), t);
    std::size_t k = (it == nodes_t_.begin()) ? 0 : static_cast<std::size_t>(it - nodes_t_.begin()) - 1;
    const Complex v = f_(t);
    if (v == Complex(0.0, 0.0)) {
        std::ostringstream os;
        os << "DistinguishedLog: CF vanishes at t = " << t;
        throw VanishingCfError(os.str());
    }
    const double theta = nodes_theta_[k] + principal_arg_ratio(v, nodes_value_[k]);
    return {std::log(std::abs(v)), theta};
}

namespace {

/// Wynn's epsilon algorithm on a sequence of partial sums. Returns the best
/// stabilized estimate and a stabilization measure (gap between the last two
/// accepted extrapolants).
std::pair<double, double> epsilon_extrapolate(const std::vector<double>& partial) {
    if (partial.empty()) return {0.0, 0.0};
    if (partial.size() == 1) return {partial[0], std::abs(partial[0])};
    std::vector<double> prev_col;                      // eps_{k-1}
    std::vector<double> col(partial.begin(), partial.end());  // eps_0
    double best = col.back();
    double best_gap = std::abs(col[col.size() - 1] - col[col.size() - 2]);
    const double noise_floor = 1e-15 * (1.0 + std::abs(best));
    for (int k = 0; col.size() >= 2; ++k) {
        std::vector<double> next(col.size() - 1);
        for (std::size_t i = 0; i + 1 < col.size(); ++i) {
            const double denom = col[i + 1] - col[i];
            const double base = (k == 0) ? 0.0 : prev_col[i + 1];
            if (std::abs(denom) < noise_floor) {
                // converged column; accept the entry directly
                next[i] = col[i + 1];
            } else {
                next[i] = base + 1.0 / denom;
            }
        }
        prev_col = std::move(col);
        col = std::move(next);
        // even columns (k odd here means col is eps_{k+1}) approximate the sum
        if (k % 2 == 1 && col.size() >= 2) {
            const double gap = std::abs(col[col.size() - 1] - col[col.size() - 2]);
            if (gap < best_gap) {
                best_gap = gap;
                best = col.back();
            }
        }
    }
    return {best, best_gap};
}

}  // namespace

CdfResult gil_pelaez_cdf(const CfEvaluator& f, double x, const GilPelaezSettings& settings) {
    // mean estimate for the t -> 0 limit of the integrand: Im(log f(h))/h
    const double h0 = 1e-6;
    const Complex fh = f(h0);
    const double mean = std::atan2(fh.imag(), fh.real()) / h0;

    const double eps_t = 1e-9;
    auto integrand = [&](double t) -> Complex {
        if (t < eps_t) return {mean - x, 0.0};
        const Complex v = std::polar(1.0, -t * x) * f(t);
        return {v.imag() / t, 0.0};
    };

    const IntegralResult bulk =
        adaptive_simpson(integrand, 0.0, settings.t_bulk, settings.quad);

    // oscillatory tail: half-period blocks, epsilon-accelerated partial sums
    const double block = kPi / std::max(1.0, std::abs(x));
    std::vector<double> partial;
    double sum = bulk.value.real();
    double t = settings.t_bulk;
    while (t < settings.t_max) {
        const double next = std::min(t + block, settings.t_max);
        sum += adaptive_simpson(integrand, t, next, settings.quad).value.real();
        partial.push_back(sum);
        t = next;
    }
    auto [accel, gap] = epsilon_extrapolate(partial);
    if (partial.empty()) {
        accel = sum;
        gap = bulk.error_estimate;
    }

    const double raw = 0.5 - accel / kPi;
    const double tail = gap / kPi;
    if (!(tail <= settings.stabilize_tol) || !std::isfinite(raw)) {
        std::ostringstream os;
        os << "gil_pelaez_cdf: tail did not stabilize at x = " << x << " (partial value " << raw
           << ", tail estimate " << tail << ")";
        throw InversionError(os.str(), std::clamp(raw, 0.0, 1.0), tail);
    }
    return {std::clamp(raw, 0.0, 1.0), tail};
}

}  // namespace qid
