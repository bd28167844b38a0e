#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "qid/quadrature.hpp"

namespace qid {

/// A point mass of `weight` placed at `location`: contributes a jump of
/// the signed function at `location` (right-continuous convention).
struct Atom {
    double location = 0.0;
    double weight = 0.0;

    bool operator==(const Atom&) const = default;
};

/// Constant density `slope` on [left, right], zero elsewhere.
struct Segment {
    double left = 0.0;
    double right = 0.0;
    double slope = 0.0;

    bool operator==(const Segment&) const = default;
};

/// Right-continuous signed function of bounded variation vanishing at -inf,
/// represented exactly as finitely many atoms plus a piecewise-linear
/// continuous part. Immutable after construction.
///
/// Construction normalizes: atoms sorted and merged at bitwise-equal
/// locations, zero weights/slopes dropped, touching segments with equal
/// slope fused. Generators must not emit distinct atoms closer than 1e-12;
/// locations are compared exactly as given.
class PiecewiseBV {
  public:
    PiecewiseBV() = default;
    PiecewiseBV(std::vector<Atom> atoms, std::vector<Segment> segments);

    static PiecewiseBV from_atoms(std::vector<Atom> atoms);
    /// Indicator step w * 1_{[location, inf)}.
    static PiecewiseBV step(double location, double weight = 1.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Segment>& segments() const { return segments_; }
    bool empty() const { return atoms_.empty() && segments_.empty(); }

    /// G(x), right-continuous.
    double eval(double x) const;

    /// Total variation on the whole line.
    double total_variation() const;

    /// |G|(x), the total variation on (-inf, x].
    double variation(double x) const;

    /// G(+inf).
    double limit_at_infinity() const;

    /// Smallest interval containing all atoms and segments (0,0 if empty).
    std::pair<double, double> support_hull() const;

    bool operator==(const PiecewiseBV& other) const = default;

  private:
    std::vector<Atom> atoms_;        // strictly increasing locations, nonzero weights
    std::vector<Segment> segments_;  // disjoint, sorted, nonzero slopes
};

/// Hahn-Jordan decomposition: both parts non-decreasing,
/// original == positive - negative and |G| == positive + negative.
struct JordanPair {
    PiecewiseBV positive;
    PiecewiseBV negative;
};

JordanPair hahn_jordan(const PiecewiseBV& g);

/// Exact linear combination a*G + b*H (atom merge, segment overlap splitting).
PiecewiseBV combine(double a, const PiecewiseBV& g, double b, const PiecewiseBV& h);

/// Lebesgue-Stieltjes integral of h against dG: atom sums are exact, segment
/// parts use adaptive Simpson. Throws QuadratureError (with the partial value)
/// if a segment integral does not converge within quad.max_depth.
IntegralResult stieltjes_integral(const PiecewiseBV& g,
                                  const std::function<std::complex<double>(double)>& h,
                                  const QuadratureSettings& quad = {});

double stieltjes_integral_real(const PiecewiseBV& g, const std::function<double(double)>& h,
                               const QuadratureSettings& quad = {});

}  // namespace qid
