#pragma once

// Reference oracle: Newmark constant average acceleration (gamma = 1/2,
// beta = 1/4), in the closed linear form for the elastic model and with a
// Newton-Raphson loop around a backward-Euler slider update for the
// viscoplastic model. Results are mapped into the mixed-state layout so the
// two integrator families can be compared node by node.

#include <cstddef>

#include "mvi/loading.hpp"
#include "mvi/model.hpp"

namespace mvi {

/// Newton-Raphson controls for the viscoplastic solve. gamma and beta are
/// fixed at the constant-average-acceleration values and not configurable.
struct NewmarkSettings {
    static constexpr double gamma = 0.5;
    static constexpr double beta = 0.25;

    double nr_tolerance = 1e-7;         ///< displacement-increment norm bound
    std::size_t nr_max_iterations = 10;
};

/// Linear elastic run. Forcing is sampled at the node times t_r, matching
/// the one-step schemes' convention. The mixed-state mapping uses
/// p_hat = m*v and accumulates j by the trapezoidal rule on the internal
/// force, seeded from the same initial-impulse identification as init_state.
[[nodiscard]] SimulationResult newmark_linear(const OscillatorParams& p, const TimeGrid& g,
                                              const ForcingRecord& rec,
                                              const InitialConditions& ic);

/// Viscoplastic run with the series slider-dashpot constitutive law
/// F = k*(u - u1), eta*u1' = <|F| - Fy>*sgn(F), integrated per step by
/// backward Euler on u1 inside a Newton-Raphson loop on the displacement.
/// Steps that exhaust nr_max_iterations are listed in nonconverged_steps;
/// the run continues with the last iterate.
[[nodiscard]] SimulationResult newmark_viscoplastic(const OscillatorParams& p, const TimeGrid& g,
                                                    const ForcingRecord& rec,
                                                    const InitialConditions& ic,
                                                    const NewmarkSettings& settings = {});

/// Local backward-Euler update of the slider for a frozen end displacement:
/// given the trial force F_tr = k*(u - u1_prev), returns the end-of-step
/// force. Elastic whenever |F_tr| <= fy; otherwise the viscous return
/// F = (F_tr + (h*k/eta)*fy*sgn(F_tr)) / (1 + h*k/eta). Exposed for direct
/// testing against root-bracketing on the constitutive residual.
struct LocalReturn {
    double force = 0.0;     ///< end-of-step internal force
    double tangent = 0.0;   ///< dF/du at the end of the step
    double u1 = 0.0;        ///< end-of-step slider deformation
    bool plastic = false;
};

[[nodiscard]] LocalReturn local_return(double u, double u1_prev, double k, double fy,
                                       double eta, double h);

} // namespace mvi
