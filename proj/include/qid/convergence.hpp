#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qid/fourier.hpp"
#include "qid/piecewise_bv.hpp"
#include "qid/scenario.hpp"

namespace qid {

enum class Verdict { confirmed, refuted, inconclusive };

std::string to_string(Verdict v);

/// One diagnostic statistic observed along the index ladder.
struct TraceCheck {
    std::string name;
    std::vector<long long> indices;
    std::vector<double> trace;
    double threshold = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::string witness;                 // nonempty when refuted
    std::vector<double> witness_points;  // x-pair / t-value backing the witness
};

struct ConvergenceReport {
    Verdict verdict = Verdict::inconclusive;
    std::vector<TraceCheck> tests;
    std::map<std::string, double> hypothesis_checks;
    std::vector<std::string> notes;

    const TraceCheck* find(const std::string& name) const;
};

/// Finite-sample trace semantics: "confirmed" needs the statistic below the
/// strict tolerance, or a fitted geometric decay that has already dropped
/// under `decay_cap`; "refuted" needs a persistent statistic above
/// `persist_floor` (a witness); anything else is inconclusive.
struct TraceTolerances {
    double tol = 1e-6;
    double decay_cap = 0.1;
    double persist_floor = 0.01;
    double max_decay_slope = -0.5;  // log(stat)/log(n) fit must be below this
};

Verdict classify_trace(const std::vector<long long>& indices, const std::vector<double>& trace,
                       const TraceTolerances& tols);

struct DiagnosticSettings {
    std::vector<double> x_grid;   // jittered evaluation grid for differences
    std::vector<double> t_grid;   // transform comparison grid
    TraceTolerances trace;
    TraceTolerances transform_trace{1e-6, 0.25, 0.01, -0.5};
    QuadratureSettings quad;

    DiagnosticSettings();
};

/// Shift grid points by the irrational offset sqrt(2)*1e-3 to dodge atoms.
std::vector<double> jitter_grid(std::vector<double> grid);

/// Whole-sequence test of increment convergence on a grid:
/// max over grid pairs (x1, x2) of |(G_n - G)(x2) - (G_n - G)(x1)|.
/// Grid points must avoid the atoms of `limit`.
ConvergenceReport check_difference_convergence(const std::vector<PiecewiseBV>& seq,
                                               const PiecewiseBV& limit,
                                               const std::vector<double>& grid,
                                               const std::vector<long long>& indices = {},
                                               const TraceTolerances& tols = {});

/// Basic-convergence diagnostic with two independent sufficient routes:
/// the transform route (FS transforms converge + variation bounded) and the
/// direct difference route. Either route confirming confirms the verdict.
ConvergenceReport diagnose_basic(const std::vector<PiecewiseBV>& seq,
                                 const std::optional<PiecewiseBV>& limit,
                                 const std::vector<long long>& indices = {},
                                 const DiagnosticSettings& settings = {});

/// Weak-convergence battery: bounded continuous test functions
/// (constant 1, cos(k pi x), sin(k x) for k <= 8, smooth bumps, and the
/// sqrt hat on [0, 2]). Confirmation is always "on battery".
ConvergenceReport diagnose_weak_bv(const std::vector<PiecewiseBV>& seq, const PiecewiseBV& limit,
                                   const std::vector<long long>& indices = {},
                                   const DiagnosticSettings& settings = {});

/// Tail statistic sup_n (||G_n|| - (|G_n|(r) - |G_n|(-r))) over r = 1, 2, 4, ...
/// for a sequence of non-decreasing functions.
ConvergenceReport tightness_check(const std::vector<PiecewiseBV>& seq,
                                  const TraceTolerances& tols = {});

enum class QidMode { bounded_variation, bounded_negative_part };

/// The Theorem-5/6 verification pipeline on a scenario of spectral pairs:
/// CF sampling and lower-bound check, CF Cauchy trace, distinguished logs,
/// gamma trace, psi-integral recovery of the limit spectral transform, and
/// comparison against the realized FS transforms. Emits B/M estimates and,
/// in bounded-negative-part mode, the B <= g(0) + 2M check.
struct QidDiagnosis {
    ConvergenceReport report;
    double gamma_limit = 0.0;
    TransformSamples recovered_transform;  // psi-route g on |t| <= 10
    double b_estimate = 0.0;
    double m_estimate = 0.0;
    double g0_estimate = 0.0;
};

QidDiagnosis diagnose_qid_weak_limit(const ScenarioSpec& scenario, QidMode mode,
                                     const DiagnosticSettings& settings = {});

/// Theorem-8/10 criterion against a candidate limit pair: CF equicontinuity
/// proxy at 0, gamma trace, basic-convergence diagnostic, mass trace, and
/// the final CF-vs-CF comparison.
ConvergenceReport verify_criterion(const ScenarioSpec& scenario, const SpectralPair& candidate,
                                   const DiagnosticSettings& settings = {});

}  // namespace qid
