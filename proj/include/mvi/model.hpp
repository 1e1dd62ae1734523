#pragma once

// Core value types shared by the integrators, the reference solver and the
// command line tooling: oscillator parameters, time grid, mixed state
// snapshots and simulation results.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mvi {

// ============================================================================
// Errors
// ============================================================================

/// Thrown when an operation receives parameters violating a hard invariant
/// (non-positive mass, partial yield data, non-finite values, ...).
class InvalidParams : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a step system cannot be solved. Unreachable for valid
/// parameters (the left-hand matrices are provably invertible); kept as a
/// defensive check.
class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by post-processing when a result carries no steps to process.
class EmptyResult : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ============================================================================
// Parameters and discretization
// ============================================================================

/// Physical parameters of the lumped oscillator.
///
/// The flexibility `a` is the stored quantity; stiffness is always derived as
/// k = 1/a so the two can never drift apart. `fy` and `eta` are either both
/// present (viscoplastic model: elastic spring in series with a yield-force
/// slider regularized by a viscous damper) or both absent (elastic model).
/// Units are not enforced; any consistent system works.
struct OscillatorParams {
    double m = 0.0;                ///< mass
    double c = 0.0;                ///< viscous damping coefficient
    double a = 0.0;                ///< flexibility, reciprocal of stiffness
    std::optional<double> fy;      ///< yield force of the slider
    std::optional<double> eta;     ///< viscosity regularizing the slider

    [[nodiscard]] double stiffness() const { return 1.0 / a; }
    [[nodiscard]] bool is_viscoplastic() const { return fy.has_value() && eta.has_value(); }
};

[[nodiscard]] OscillatorParams elastic_params(double m, double c, double a);
[[nodiscard]] OscillatorParams viscoplastic_params(double m, double c, double a,
                                                   double fy, double eta);

/// Uniform time grid starting at t0 = 0; node r lives at t_r = r*h.
/// A valid run has n_steps >= 1; n_steps = 0 is tolerated by the library
/// (simulations then return just the initial state) but flagged by
/// validate_params so front ends reject it.
struct TimeGrid {
    double h = 0.0;                ///< time step
    std::size_t n_steps = 0;       ///< number of steps

    [[nodiscard]] double time_at(std::size_t r) const { return static_cast<double>(r) * h; }
    [[nodiscard]] double total_time() const { return time_at(n_steps); }
};

// ============================================================================
// State
// ============================================================================

/// One time-node snapshot of the mixed variables.
///
/// `u` is the displacement, `p_hat` the momentum (m times velocity), `j` the
/// impulse of the spring force (its rate is the internal force), and `u1_hat`
/// the slider deformation, identically zero for the elastic model.
struct MixedState {
    double u = 0.0;
    double p_hat = 0.0;
    double j = 0.0;
    double u1_hat = 0.0;
};

/// Initial data for a run. `i0` is the impulse of the externally applied
/// force accumulated before t = 0 (zero for an initially static system).
struct InitialConditions {
    double u0 = 0.0;
    double v0 = 0.0;
    double u1_0 = 0.0;
    double i0 = 0.0;
};

/// Which linear system produced a step.
enum class Branch { Elastic, PlasticPositive, PlasticNegative };

[[nodiscard]] std::string_view branch_name(Branch b);

/// Trajectory of one run: n_steps + 1 states plus per-step branch labels and
/// the forcing values actually used. `nonconverged_steps` lists 1-based step
/// indices where an iterative reference solver hit its iteration cap; it is
/// always empty for the one-step schemes, which never iterate.
struct SimulationResult {
    TimeGrid grid;
    std::vector<MixedState> states;
    std::vector<Branch> branch_labels;
    std::vector<double> forcing_used;
    std::vector<std::size_t> nonconverged_steps;

    [[nodiscard]] std::size_t n_steps() const { return branch_labels.size(); }
    [[nodiscard]] const MixedState& final_state() const { return states.back(); }
};

// ============================================================================
// Validation
// ============================================================================

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
};

using DiagnosticsList = std::vector<Diagnostic>;

/// Checks hard invariants (ERROR) and stability-related soft conditions
/// (WARNING). Pure: never throws, same input gives the same list.
///
/// Warnings cover the two analytic stability bounds: the under-damped
/// condition a*c^2 < 4m required for the elastic amplification eigenvalue
/// bound, and the viscoplastic damping bound c < m/(a*eta) + 2*sqrt(m/a).
[[nodiscard]] DiagnosticsList validate_params(const OscillatorParams& p, const TimeGrid& g);

[[nodiscard]] bool has_errors(const DiagnosticsList& diags);

/// Renders "ERROR: ..." / "WARNING: ..." lines, one per diagnostic.
[[nodiscard]] std::string format_diagnostics(const DiagnosticsList& diags);

/// Throws InvalidParams when validate_params reports any ERROR. Grid checks
/// can be skipped for operations that do not involve a grid.
void require_valid(const OscillatorParams& p);
void require_valid(const OscillatorParams& p, const TimeGrid& g);

} // namespace mvi
