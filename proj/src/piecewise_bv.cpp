#include "qid/piecewise_bv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qid/errors.hpp"

namespace qid {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "PiecewiseBV: non-finite " << what;
        throw std::invalid_argument(os.str());
    }
}

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
    for (const Atom& a : atoms) {
        require_finite(a.location, "atom location");
        require_finite(a.weight, "atom weight");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!out.empty() && out.back().location == a.location) {
            out.back().weight += a.weight;
        } else {
            out.push_back(a);
        }
    }
    std::erase_if(out, [](const Atom& a) { return a.weight == 0.0; });
    return out;
}

std::vector<Segment> normalize_segments(std::vector<Segment> segments) {
    for (const Segment& s : segments) {
        require_finite(s.left, "segment endpoint");
        require_finite(s.right, "segment endpoint");
        require_finite(s.slope, "segment slope");
        if (!(s.left < s.right)) {
            throw std::invalid_argument("PiecewiseBV: segment needs left < right");
        }
    }
    std::erase_if(segments, [](const Segment& s) { return s.slope == 0.0; });
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.left < b.left; });
    std::vector<Segment> out;
    out.reserve(segments.size());
    for (const Segment& s : segments) {
        if (!out.empty() && s.left < out.back().right) {
            throw std::invalid_argument("PiecewiseBV: overlapping segments");
        }
        if (!out.empty() && out.back().right == s.left && out.back().slope == s.slope) {
            out.back().right = s.right;
        } else {
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace

PiecewiseBV::PiecewiseBV(std::vector<Atom> atoms, std::vector<Segment> segments)
    : atoms_(normalize_atoms(std::move(atoms))), segments_(normalize_segments(std::move(segments))) {}

PiecewiseBV PiecewiseBV::from_atoms(std::vector<Atom> atoms) {
    return PiecewiseBV(std::move(atoms), {});
}

PiecewiseBV PiecewiseBV::step(double location, double weight) {
    return PiecewiseBV({{location, weight}}, {});
}

double PiecewiseBV::eval(double x) const {
    double v = 0.0;
    for (const Atom& a : atoms_) {
        if (a.location > x) break;
        v += a.weight;
    }
    for (const Segment& s : segments_) {
        if (s.left >= x) break;
        v += s.slope * (std::min(x, s.right) - s.left);
    }
    return v;
}

double PiecewiseBV::total_variation() const {
    double v = 0.0;
    for (const Atom& a : atoms_) v += std::abs(a.weight);
    for (const Segment& s : segments_) v += std::abs(s.slope) * (s.right - s.left);
    return v;
}

double PiecewiseBV::variation(double x) const {
    double v = 0.0;
    for (const Atom& a : atoms_) {
        if (a.location > x) break;
        v += std::abs(a.weight);
    }
    for (const Segment& s : segments_) {
        if (s.left >= x) break;
        v += std::abs(s.slope) * (std::min(x, s.right) - s.left);
    }
    return v;
}

double PiecewiseBV::limit_at_infinity() const {
    double v = 0.0;
    for (const Atom& a : atoms_) v += a.weight;
    for (const Segment& s : segments_) v += s.slope * (s.right - s.left);
    return v;
}

std::pair<double, double> PiecewiseBV::support_hull() const {
    if (empty()) return {0.0, 0.0};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Atom& a : atoms_) {
        lo = std::min(lo, a.location);
        hi = std::max(hi, a.location);
    }
    for (const Segment& s : segments_) {
        lo = std::min(lo, s.left);
        hi = std::max(hi, s.right);
    }
    return {lo, hi};
}

JordanPair hahn_jordan(const PiecewiseBV& g) {
    std::vector<Atom> pos_atoms, neg_atoms;
    for (const Atom& a : g.atoms()) {
        (a.weight > 0.0 ? pos_atoms : neg_atoms).push_back({a.location, std::abs(a.weight)});
    }
    std::vector<Segment> pos_segs, neg_segs;
    for (const Segment& s : g.segments()) {
        (s.slope > 0.0 ? pos_segs : neg_segs).push_back({s.left, s.right, std::abs(s.slope)});
    }
    return {PiecewiseBV(std::move(pos_atoms), std::move(pos_segs)),
            PiecewiseBV(std::move(neg_atoms), std::move(neg_segs))};
}

PiecewiseBV combine(double a, const PiecewiseBV& g, double b, const PiecewiseBV& h) {
    std::vector<Atom> atoms;
    atoms.reserve(g.atoms().size() + h.atoms().size());
    for (const Atom& at : g.atoms()) atoms.push_back({at.location, a * at.weight});
    for (const Atom& at : h.atoms()) atoms.push_back({at.location, b * at.weight});

    // Split both continuous parts on the union of breakpoints, then add slopes.
    std::vector<double> cuts;
    for (const Segment& s : g.segments()) {
        cuts.push_back(s.left);
        cuts.push_back(s.right);
    }
    for (const Segment& s : h.segments()) {
        cuts.push_back(s.left);
        cuts.push_back(s.right);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto slope_at = [](const PiecewiseBV& f, double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        for (const Segment& s : f.segments()) {
            if (s.left <= mid && mid < s.right) return s.slope;
        }
        return 0.0;
    };

    std::vector<Segment> segments;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        const double slope = a * slope_at(g, lo, hi) + b * slope_at(h, lo, hi);
        if (slope != 0.0) segments.push_back({lo, hi, slope});
    }
    return PiecewiseBV(std::move(atoms), std::move(segments));
}

IntegralResult stieltjes_integral(const PiecewiseBV& g,
                                  const std::function<std::complex<double>(double)>& h,
                                  const QuadratureSettings& quad) {
    IntegralResult result;
    for (const Atom& a : g.atoms()) result.value += a.weight * h(a.location);
    for (const Segment& s : g.segments()) {
        IntegralResult part = adaptive_simpson(h, s.left, s.right, quad);
        result.value += s.slope * part.value;
        result.error_estimate += std::abs(s.slope) * part.error_estimate;
        result.converged = result.converged && part.converged;
    }
    if (!result.converged) {
        std::ostringstream os;
        os << "stieltjes_integral: quadrature did not converge within depth " << quad.max_depth
           << " (error estimate " << result.error_estimate << ")";
        throw QuadratureError(os.str(), result.value, result.error_estimate);
    }
    return result;
}

double stieltjes_integral_real(const PiecewiseBV& g, const std::function<double(double)>& h,
                               const QuadratureSettings& quad) {
    return stieltjes_integral(
               g, [&h](double x) { return std::complex<double>(h(x), 0.0); }, quad)
        .value.real();
}

}  // namespace qid
