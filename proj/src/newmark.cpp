#include "mvi/newmark.hpp"

#include <cmath>

#include "mvi/integrators.hpp"

namespace mvi {

namespace {

void require_grid(const TimeGrid& g) {
    if (!std::isfinite(g.h) || g.h <= 0.0) {
        throw InvalidParams("time step must be finite and > 0");
    }
}

// Shared result scaffolding: initial mixed state with the spring impulse
// identified from the momentum balance, exactly as the one-step schemes do.
SimulationResult seed_result(const OscillatorParams& p, const TimeGrid& g,
                             const ForcingRecord& rec, const InitialConditions& ic) {
    SimulationResult res;
    res.grid = g;
    res.forcing_used = sample_forcing(rec, g, p.m);

    InitialConditions effective = ic;
    effective.i0 += pre_initial_impulse(rec, p.m);

    res.states.reserve(g.n_steps + 1);
    res.states.push_back(init_state(p, effective));
    res.branch_labels.reserve(g.n_steps);
    return res;
}

} // namespace

SimulationResult newmark_linear(const OscillatorParams& p, const TimeGrid& g,
                                const ForcingRecord& rec, const InitialConditions& ic) {
    require_valid(p);
    require_grid(g);
    if (p.is_viscoplastic()) {
        throw InvalidParams("linear reference requires elastic parameters");
    }

    const double h = g.h;
    const double k = p.stiffness();
    const double k_eff = k + 2.0 * p.c / h + 4.0 * p.m / (h * h);

    SimulationResult res = seed_result(p, g, rec, ic);

    double u = ic.u0;
    double v = ic.v0;
    double acc = (forcing_value(rec, 0.0, p.m) - p.c * v - k * u) / p.m;
    double j = res.states.front().j;
    double force = k * u;

    for (std::size_t r = 1; r <= g.n_steps; ++r) {
        const double fr = res.forcing_used[r - 1];
        const double p_eff = fr + p.m * (4.0 * u / (h * h) + 4.0 * v / h + acc) +
                             p.c * (2.0 * u / h + v);
        const double u_new = p_eff / k_eff;
        const double acc_new = 4.0 * (u_new - u) / (h * h) - 4.0 * v / h - acc;
        const double v_new = v + 0.5 * h * (acc + acc_new);
        const double force_new = k * u_new;

        // Spring impulse for comparison with the mixed schemes: trapezoidal
        // accumulation of the internal force.
        j += 0.5 * h * (force + force_new);

        u = u_new;
        v = v_new;
        acc = acc_new;
        force = force_new;
        res.states.push_back(MixedState{u, p.m * v, j, 0.0});
        res.branch_labels.push_back(Branch::Elastic);
    }
    return res;
}

LocalReturn local_return(double u, double u1_prev, double k, double fy, double eta, double h) {
    LocalReturn out;
    const double f_trial = k * (u - u1_prev);
    if (std::abs(f_trial) <= fy) {
        out.force = f_trial;
        out.tangent = k;
        out.u1 = u1_prev;
        out.plastic = false;
        return out;
    }
    // Backward Euler on the slider rate keeps the force direction of the
    // trial state; the viscous return scales the overshoot down without
    // crossing zero.
    const double q = h * k / eta;
    const double sign = f_trial > 0.0 ? 1.0 : -1.0;
    out.force = (f_trial + q * fy * sign) / (1.0 + q);
    out.tangent = k / (1.0 + q);
    out.u1 = u - out.force / k;
    out.plastic = true;
    return out;
}

SimulationResult newmark_viscoplastic(const OscillatorParams& p, const TimeGrid& g,
                                      const ForcingRecord& rec, const InitialConditions& ic,
                                      const NewmarkSettings& settings) {
    require_valid(p);
    require_grid(g);
    if (!p.is_viscoplastic()) {
        throw InvalidParams("viscoplastic reference requires yield force and viscosity");
    }
    if (!(settings.nr_tolerance > 0.0) || settings.nr_max_iterations < 1) {
        throw InvalidParams("iteration controls must be positive");
    }

    const double h = g.h;
    const double k = p.stiffness();
    const double fy = *p.fy;
    const double eta = *p.eta;

    SimulationResult res = seed_result(p, g, rec, ic);

    double u = ic.u0;
    double v = ic.v0;
    double u1 = ic.u1_0;
    double force = k * (u - u1);
    double acc = (forcing_value(rec, 0.0, p.m) - p.c * v - force) / p.m;
    double j = res.states.front().j;

    for (std::size_t r = 1; r <= g.n_steps; ++r) {
        const double fr = res.forcing_used[r - 1];

        double u_new = u;
        LocalReturn local = local_return(u_new, u1, k, fy, eta, h);
        bool converged = false;
        for (std::size_t it = 0; it < settings.nr_max_iterations; ++it) {
            local = local_return(u_new, u1, k, fy, eta, h);
            const double acc_new = 4.0 * (u_new - u) / (h * h) - 4.0 * v / h - acc;
            const double v_new = v + 0.5 * h * (acc + acc_new);
            const double residual = p.m * acc_new + p.c * v_new + local.force - fr;
            const double jacobian = 4.0 * p.m / (h * h) + 2.0 * p.c / h + local.tangent;
            const double du = -residual / jacobian;
            u_new += du;
            if (std::abs(du) < settings.nr_tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) res.nonconverged_steps.push_back(r);

        local = local_return(u_new, u1, k, fy, eta, h);
        const double acc_new = 4.0 * (u_new - u) / (h * h) - 4.0 * v / h - acc;
        const double v_new = v + 0.5 * h * (acc + acc_new);

        j += 0.5 * h * (force + local.force);

        u = u_new;
        v = v_new;
        acc = acc_new;
        u1 = local.u1;
        force = local.force;
        res.states.push_back(MixedState{u, p.m * v, j, u1});
        res.branch_labels.push_back(!local.plastic       ? Branch::Elastic
                                    : local.force > 0.0 ? Branch::PlasticPositive
                                                        : Branch::PlasticNegative);
    }
    return res;
}

} // namespace mvi
