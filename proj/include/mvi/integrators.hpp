#pragma once

// The mixed variational one-step schemes. Each step solves one small linear
// system lhs * x_new = rhs * x_old + load whose matrices come from the
// stationarity of the discretized extended action: a 3x3 system for the
// elastic oscillator and a 4x4 system per branch for the viscoplastic one.
// Branch selection is non-iterative: the elastic-assumed impulse alone
// decides whether a plastic system must be solved instead.

#include <cstddef>
#include <utility>

#include <Eigen/Dense>

#include "mvi/loading.hpp"
#include "mvi/model.hpp"

namespace mvi {

// Small dense matrix/vector with inline storage; sized 3 or 4 at runtime.
using StepMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using StepVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

/// One assembled branch of the one-step update. `lhs_inverse` is the
/// closed-form inverse used as the production solve path; `lhs` is kept so
/// independent checks can re-solve the same system.
///
/// Unknown ordering: elastic (u, p_hat, j); viscoplastic (u, j, p_hat, u1_hat).
struct StepSystem {
    StepMatrix lhs;
    StepMatrix rhs;
    StepMatrix lhs_inverse;
    StepVector load;
    Branch branch = Branch::Elastic;
};

/// Outcome of the yield check on the elastic-assumed impulse. The step is
/// elastic iff lower <= trial_j <= upper (closed interval: boundary ties
/// stay elastic), where lower/upper = previous impulse -/+ h*fy.
struct BranchDecision {
    double trial_j = 0.0;
    Branch branch = Branch::Elastic;
    double lower = 0.0;
    double upper = 0.0;
};

// ============================================================================
// Elastic scheme (3x3)
// ============================================================================

/// Assembles the elastic one-step system for forcing value rf at the
/// interval end. Unknowns (u, p_hat, j).
[[nodiscard]] StepSystem assemble_elastic(const OscillatorParams& p, double h, double rf);

/// Closed-form inverse of the elastic left-hand matrix, built directly from
/// (m, c, a, h); all entries are rationals over X = h^2 + 2ach + 4am > 0.
[[nodiscard]] StepMatrix invert_elastic_lhs(const OscillatorParams& p, double h);

/// Maps initial conditions to the t = 0 mixed state: p_hat = m*v0 and the
/// initial spring impulse identified from the momentum balance,
/// j = i0 - p_hat - c*u0.
[[nodiscard]] MixedState init_state(const OscillatorParams& p, const InitialConditions& ic);

/// Advances one elastic step; u1_hat is carried through unchanged.
[[nodiscard]] MixedState step_elastic(const MixedState& s, const StepSystem& sys);

// ============================================================================
// Viscoplastic scheme (4x4, three branches)
// ============================================================================

/// Assembles one branch of the viscoplastic one-step system. Unknowns
/// (u, j, p_hat, u1_hat). The plastic branches share their matrices and
/// differ only in the sign of the slider load entries.
[[nodiscard]] StepSystem assemble_viscoplastic(const OscillatorParams& p, double h, double rf,
                                               Branch branch);

/// Closed-form inverse of the selected branch's left-hand matrix.
[[nodiscard]] StepMatrix invert_viscoplastic_lhs(const OscillatorParams& p, double h,
                                                 Branch branch);

/// Yield check: classifies the elastic-assumed impulse against the closed
/// interval [prev_j - h*fy, prev_j + h*fy].
[[nodiscard]] BranchDecision classify_branch(double trial_j, double prev_j, double h, double fy);

/// Advances one viscoplastic step: solves the elastic-assumed system,
/// classifies, and re-solves the indicated plastic system if needed.
/// Exactly one linear solve on elastic steps, two otherwise; no iteration.
[[nodiscard]] std::pair<MixedState, Branch> step_viscoplastic(const MixedState& s,
                                                              const OscillatorParams& p,
                                                              double h, double rf);

// ============================================================================
// Trajectory driver
// ============================================================================

/// Runs init_state followed by n_steps one-step updates, dispatching on
/// whether `p` carries yield data. Records per-step branch labels and the
/// forcing values used. Pure: identical inputs give identical results.
[[nodiscard]] SimulationResult simulate(const OscillatorParams& p, const TimeGrid& g,
                                        const ForcingRecord& rec, const InitialConditions& ic);

} // namespace mvi
