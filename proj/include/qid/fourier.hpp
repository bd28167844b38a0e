#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qid/piecewise_bv.hpp"
#include "qid/quadrature.hpp"

namespace qid {

using CfEvaluator = std::function<std::complex<double>(double)>;

/// Complex values of a function sampled on a strictly increasing real grid
/// that contains t = 0.
struct TransformSamples {
    std::vector<double> grid;
    std::vector<std::complex<double>> values;

    TransformSamples() = default;
    TransformSamples(std::vector<double> g, std::vector<std::complex<double>> v);

    std::size_t size() const { return grid.size(); }
    std::size_t index_of_zero() const;
};

/// Symmetric uniform grid on [-t_max, t_max] containing 0 exactly.
std::vector<double> symmetric_grid(double t_max, double step);

/// The default t-grid: spacing 0.01 on [-40, 40].
const std::vector<double>& default_t_grid();

/// Fourier-Stieltjes transform of G at t, in closed form (no quadrature).
/// At t = 0 returns G(+inf).
std::complex<double> fs_transform(const PiecewiseBV& g, double t);

TransformSamples sample_fs(const PiecewiseBV& g, const std::vector<double>& grid);
TransformSamples sample_cf(const CfEvaluator& f, const std::vector<double>& grid);

/// Continuous-branch logarithm of nonvanishing samples with f(0) = 1:
/// value = ln|f| + i*theta with theta unwrapped outward from t = 0.
/// Throws VanishingCfError on a zero sample and CoarseGridError when a
/// consecutive phase increment reaches pi.
TransformSamples distinguished_log(const TransformSamples& samples);

/// Distinguished logarithm of a black-box nonvanishing CF, backed by a phase
/// table on [t_min, t_max]. Evaluation at any t in range is exact up to the
/// grid-fine-enough assumption; intervals where the increment approaches
/// pi/2 are densified tenfold (recursively, a few levels) at construction.
class DistinguishedLog {
  public:
    DistinguishedLog(CfEvaluator f, double t_min, double t_max, double step = 0.01);

    std::complex<double> operator()(double t) const;

    double t_min() const { return nodes_t_.front(); }
    double t_max() const { return nodes_t_.back(); }

  private:
    CfEvaluator f_;
    std::vector<double> nodes_t_;       // sorted, contains 0
    std::vector<double> nodes_theta_;   // unwrapped phase at nodes
    std::vector<std::complex<double>> nodes_value_;
};

struct GilPelaezSettings {
    QuadratureSettings quad{1e-12, 40};
    double t_bulk = 8.0;      // adaptive sweep near the origin
    double t_max = 200.0;     // truncation point of the oscillatory tail
    double stabilize_tol = 1e-7;
};

struct CdfResult {
    double value = 0.0;
    double tail_estimate = 0.0;
};

/// Gil-Pelaez inversion F(x) = 1/2 - (1/pi) Int_0^inf Im(e^{-itx} f(t))/t dt.
/// The tail beyond t_bulk is summed over half-period blocks and accelerated
/// with Wynn's epsilon algorithm; the result is clamped to [0, 1].
/// Throws InversionError (partial value + tail estimate) when the
/// extrapolation does not stabilize below stabilize_tol.
CdfResult gil_pelaez_cdf(const CfEvaluator& f, double x, const GilPelaezSettings& settings = {});

}  // namespace qid
