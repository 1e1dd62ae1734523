#include "mvi/integrators.hpp"

#include <cmath>

namespace mvi {

namespace {

void require_step(double h) {
    if (!std::isfinite(h) || h <= 0.0) {
        throw InvalidParams("time step must be finite and > 0");
    }
}

void require_finite_state(const MixedState& s) {
    if (!std::isfinite(s.u) || !std::isfinite(s.p_hat) || !std::isfinite(s.j) ||
        !std::isfinite(s.u1_hat)) {
        throw InvalidParams("state fields must be finite");
    }
}

// X > 0 for any valid parameters, so both left-hand matrices are invertible.
double stability_denominator(const OscillatorParams& p, double h) {
    return h * h + 2.0 * p.a * p.c * h + 4.0 * p.a * p.m;
}

StepVector solve(const StepSystem& sys, const StepVector& x_old) {
    const StepVector x = sys.lhs_inverse * (sys.rhs * x_old + sys.load);
    if (!x.allFinite()) {
        throw SingularSystem("one-step solve produced a non-finite state");
    }
    return x;
}

void require_viscoplastic(const OscillatorParams& p) {
    require_valid(p);
    if (!p.is_viscoplastic()) {
        throw InvalidParams("operation requires yield force and viscosity");
    }
}

} // namespace

// ============================================================================
// Elastic scheme
// ============================================================================

StepSystem assemble_elastic(const OscillatorParams& p, double h, double rf) {
    require_valid(p);
    require_step(h);
    if (!std::isfinite(rf)) throw InvalidParams("forcing value must be finite");

    const double mh = p.m / h;
    const double c2 = 0.5 * p.c;
    const double ah = p.a / h;
    const double alpha = 0.5 * h * rf;

    StepSystem sys;
    sys.branch = Branch::Elastic;
    sys.lhs.resize(3, 3);
    sys.rhs.resize(3, 3);
    sys.load.resize(3);
    sys.lhs << mh + c2, 0.0, 0.5,
              -mh + c2, 1.0, 0.5,
              -0.5,     0.0, ah;
    sys.rhs << mh + c2, 1.0, 0.5,
              -mh + c2, 0.0, 0.5,
               0.5,     0.0, ah;
    sys.load << alpha, alpha, 0.0;
    sys.lhs_inverse = invert_elastic_lhs(p, h);
    return sys;
}

StepMatrix invert_elastic_lhs(const OscillatorParams& p, double h) {
    require_valid(p);
    require_step(h);

    const double m = p.m;
    const double c = p.c;
    const double a = p.a;
    const double X = stability_denominator(p, h);

    StepMatrix inv(3, 3);
    inv << 4.0 * a * h / X,                       0.0, -2.0 * h * h / X,
          -(h * h + 2.0 * a * c * h - 4.0 * a * m) / X, 1.0, -4.0 * m * h / X,
           2.0 * h * h / X,                       0.0,  2.0 * (2.0 * m + c * h) * h / X;
    return inv;
}

MixedState init_state(const OscillatorParams& p, const InitialConditions& ic) {
    require_valid(p);
    if (!std::isfinite(ic.u0) || !std::isfinite(ic.v0) || !std::isfinite(ic.u1_0) ||
        !std::isfinite(ic.i0)) {
        throw InvalidParams("initial conditions must be finite");
    }
    if (!p.is_viscoplastic() && ic.u1_0 != 0.0) {
        throw InvalidParams("slider deformation requires the viscoplastic model");
    }

    MixedState s;
    s.u = ic.u0;
    s.p_hat = p.m * ic.v0;
    // Initial spring impulse identified from the t = 0 momentum balance.
    s.j = ic.i0 - s.p_hat - p.c * ic.u0;
    s.u1_hat = ic.u1_0;
    return s;
}

MixedState step_elastic(const MixedState& s, const StepSystem& sys) {
    require_finite_state(s);
    if (sys.lhs.rows() != 3) throw InvalidParams("elastic step needs a 3x3 system");

    StepVector x_old(3);
    x_old << s.u, s.p_hat, s.j;
    const StepVector x = solve(sys, x_old);

    MixedState next;
    next.u = x[0];
    next.p_hat = x[1];
    next.j = x[2];
    next.u1_hat = s.u1_hat;
    return next;
}

// ============================================================================
// Viscoplastic scheme
// ============================================================================

StepSystem assemble_viscoplastic(const OscillatorParams& p, double h, double rf, Branch branch) {
    require_viscoplastic(p);
    require_step(h);
    if (!std::isfinite(rf)) throw InvalidParams("forcing value must be finite");

    const double mh = p.m / h;
    const double c2 = 0.5 * p.c;
    const double ah = p.a / h;
    const double beta = 0.5 / *p.eta;
    const double alpha = 0.5 * h * rf;
    const double gamma = 0.5 * h * *p.fy / *p.eta;

    // The two slider rows carry a/h with opposite signs; the plastic
    // branches add beta to both. Keeping the negated entry as -(a/h) makes
    // the elastic branch's slider rows cancel exactly, so u1_hat stays
    // bitwise zero until the first plastic step.
    const double slider = branch == Branch::Elastic ? ah : ah + beta;
    const double slider_neg = branch == Branch::Elastic ? -ah : -ah + beta;

    StepSystem sys;
    sys.branch = branch;
    sys.lhs.resize(4, 4);
    sys.rhs.resize(4, 4);
    sys.load.resize(4);
    sys.lhs << mh + c2, 0.5,        0.0, 0.0,
              -mh + c2, 0.5,        1.0, 0.0,
              -0.5,     slider,     0.0, 0.0,
               0.5,     slider_neg, 0.0, -1.0;
    sys.rhs << mh + c2, 0.5,        1.0, 0.0,
              -mh + c2, 0.5,        0.0, 0.0,
               0.5,     slider,     0.0, -1.0,
              -0.5,     slider_neg, 0.0, 0.0;

    const double slider_load = branch == Branch::PlasticNegative ? -gamma
                             : branch == Branch::PlasticPositive ? gamma
                                                                 : 0.0;
    sys.load << alpha, alpha, slider_load, slider_load;
    sys.lhs_inverse = invert_viscoplastic_lhs(p, h, branch);
    return sys;
}

StepMatrix invert_viscoplastic_lhs(const OscillatorParams& p, double h, Branch branch) {
    require_viscoplastic(p);
    require_step(h);

    const double m = p.m;
    const double c = p.c;
    const double a = p.a;
    const double X = stability_denominator(p, h);
    const double Y = 4.0 * m * a - 2.0 * a * c * h - h * h;

    StepMatrix inv(4, 4);
    if (branch == Branch::Elastic) {
        inv << 4.0 * a * h / X, 0.0, -2.0 * h * h / X,                0.0,
               2.0 * h * h / X, 0.0,  2.0 * h * (2.0 * m + c * h) / X, 0.0,
               Y / X,           1.0, -4.0 * m * h / X,                0.0,
               0.0,             0.0, -1.0,                            -1.0;
    } else {
        const double eta = *p.eta;
        const double W = eta * X + 2.0 * h * m + c * h * h;
        inv << 2.0 * h * (h + 2.0 * a * eta) / W,     0.0, -2.0 * h * h * eta / W,                0.0,
               2.0 * h * h * eta / W,                 0.0,  2.0 * h * eta * (2.0 * m + c * h) / W, 0.0,
               (eta * Y - c * h * h + 2.0 * h * m) / W, 1.0, -4.0 * h * m * eta / W,              0.0,
               2.0 * h * h / W,                       0.0, (-eta * X + 2.0 * h * m + c * h * h) / W, -1.0;
    }
    return inv;
}

BranchDecision classify_branch(double trial_j, double prev_j, double h, double fy) {
    BranchDecision d;
    d.trial_j = trial_j;
    d.lower = prev_j - h * fy;
    d.upper = prev_j + h * fy;
    if (trial_j > d.upper) {
        d.branch = Branch::PlasticPositive;
    } else if (trial_j < d.lower) {
        d.branch = Branch::PlasticNegative;
    } else {
        d.branch = Branch::Elastic;
    }
    return d;
}

std::pair<MixedState, Branch> step_viscoplastic(const MixedState& s, const OscillatorParams& p,
                                                double h, double rf) {
    require_finite_state(s);

    StepVector x_old(4);
    x_old << s.u, s.j, s.p_hat, s.u1_hat;

    const StepSystem trial_sys = assemble_viscoplastic(p, h, rf, Branch::Elastic);
    StepVector x = solve(trial_sys, x_old);

    const BranchDecision decision = classify_branch(x[1], s.j, h, *p.fy);
    if (decision.branch != Branch::Elastic) {
        const StepSystem plastic_sys = assemble_viscoplastic(p, h, rf, decision.branch);
        x = solve(plastic_sys, x_old);
    }

    MixedState next;
    next.u = x[0];
    next.j = x[1];
    next.p_hat = x[2];
    next.u1_hat = x[3];
    return {next, decision.branch};
}

// ============================================================================
// Trajectory driver
// ============================================================================

SimulationResult simulate(const OscillatorParams& p, const TimeGrid& g, const ForcingRecord& rec,
                          const InitialConditions& ic) {
    require_valid(p);
    require_step(g.h);

    SimulationResult res;
    res.grid = g;
    res.forcing_used = sample_forcing(rec, g, p.m);

    InitialConditions effective = ic;
    effective.i0 += pre_initial_impulse(rec, p.m);

    MixedState s = init_state(p, effective);
    res.states.reserve(g.n_steps + 1);
    res.states.push_back(s);
    res.branch_labels.reserve(g.n_steps);

    for (std::size_t r = 1; r <= g.n_steps; ++r) {
        const double rf = res.forcing_used[r - 1];
        if (p.is_viscoplastic()) {
            auto [next, branch] = step_viscoplastic(s, p, g.h, rf);
            s = next;
            res.branch_labels.push_back(branch);
        } else {
            s = step_elastic(s, assemble_elastic(p, g.h, rf));
            res.branch_labels.push_back(Branch::Elastic);
        }
        res.states.push_back(s);
    }
    return res;
}

} // namespace mvi
