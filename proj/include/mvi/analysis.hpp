#pragma once

// Stability and consistency diagnostics: amplification matrices, spectral
// radii, parameter-domain verdicts, and the per-step residuals of the two
// algebraic identities (discrete equation of motion and velocity relation)
// that every elastic step satisfies by construction.

#include <optional>
#include <string>
#include <vector>

#include "mvi/integrators.hpp"
#include "mvi/model.hpp"

namespace mvi {

/// Stability summary for one parameter set and step size.
///
/// `underdamped` is the condition a*c^2 < 4m under which every eigenvalue of
/// the elastic amplification matrix has magnitude <= 1. For viscoplastic
/// parameters, `damping_bound_ok` is the analogous bound for the plastic
/// branch matrix, 0 < c < m/(a*eta) + 2*sqrt(m/a).
struct StabilityReport {
    double rho_elastic = 0.0;
    std::optional<double> rho_plastic;
    bool underdamped = false;
    std::optional<bool> damping_bound_ok;
    std::vector<std::string> verdicts;
};

/// Closed-form elastic amplification matrix (the map from one state node to
/// the next, lhs_inverse * rhs, written directly over X). Entries depend
/// only on (m, c, a, h); the forcing enters the update affinely and does not
/// affect stability.
[[nodiscard]] StepMatrix amplification_elastic(const OscillatorParams& p, double h);

/// Largest eigenvalue magnitude of a small (<= 4x4) real matrix.
[[nodiscard]] double spectral_radius(const StepMatrix& mat);

/// Evaluates both stability conditions and the spectral radii; verdict lines
/// name any condition that fails.
[[nodiscard]] StabilityReport stability_report(const OscillatorParams& p, double h);

/// Residuals of the two per-step identities, normalized by the scale of the
/// terms (0 when everything vanishes):
///  - motion:   [p_r - p_{r-1}]/h + (c/h)(u_r - u_{r-1}) + (j_r - j_{r-1})/h - f_r
///  - velocity: m(u_r - u_{r-1}) - (h/2)(p_r + p_{r-1})
/// Each term's scale is taken from its operands -- e.g. max(|j_r|,|j_{r-1}|)/h
/// for the impulse quotient -- because that is the precision floor of the
/// expression; the term values themselves may cancel to far below it in quiet
/// stretches while the states stay large.
struct StepResiduals {
    double motion = 0.0;
    double velocity = 0.0;
};

/// Residuals for every step of a run, using the forcing values recorded in
/// the result. Both stay below 1e-10 for any trajectory produced by the
/// one-step schemes; a corrupted state shows up immediately.
[[nodiscard]] std::vector<StepResiduals> equivalence_residuals(const SimulationResult& res,
                                                               const OscillatorParams& p);

/// Same, against explicitly supplied per-step forcing values.
[[nodiscard]] std::vector<StepResiduals> equivalence_residuals(const SimulationResult& res,
                                                               const OscillatorParams& p,
                                                               const std::vector<double>& forcing);

/// Renders the report: human-readable verdicts followed by machine-readable
/// `key=value` lines.
[[nodiscard]] std::string format_report(const StabilityReport& report);

} // namespace mvi
