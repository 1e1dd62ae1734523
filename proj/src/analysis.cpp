#include "mvi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mvi/postprocess.hpp"

namespace mvi {

namespace {

double relative_residual(double sum, double scale) {
    if (scale == 0.0) return sum == 0.0 ? 0.0 : std::abs(sum);
    return std::abs(sum) / scale;
}

} // namespace

StepMatrix amplification_elastic(const OscillatorParams& p, double h) {
    require_valid(p);
    if (!std::isfinite(h) || h <= 0.0) throw InvalidParams("time step must be finite and > 0");

    const double m = p.m;
    const double c = p.c;
    const double a = p.a;
    const double X = h * h + 2.0 * a * c * h + 4.0 * a * m;
    const double Y = 4.0 * m * a - 2.0 * a * c * h - h * h;

    StepMatrix amp(3, 3);
    amp << (4.0 * m * a + 2.0 * a * c * h - h * h) / X, 4.0 * a * h / X,  0.0,
           -4.0 * m * h / X,                            Y / X,            0.0,
            2.0 * (2.0 * m + c * h) * h / X,            2.0 * h * h / X,  1.0;
    return amp;
}

double spectral_radius(const StepMatrix& mat) {
    if (mat.rows() != mat.cols() || mat.rows() == 0 || !mat.allFinite()) {
        throw InvalidParams("spectral radius needs a finite square matrix");
    }
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(mat), false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityReport stability_report(const OscillatorParams& p, double h) {
    require_valid(p);
    if (!std::isfinite(h) || h <= 0.0) throw InvalidParams("time step must be finite and > 0");

    StabilityReport report;
    report.rho_elastic = spectral_radius(amplification_elastic(p, h));
    report.underdamped = p.a * p.c * p.c < 4.0 * p.m;

    if (report.underdamped) {
        report.verdicts.push_back("under-damped (a*c^2 < 4m): elastic amplification "
                                  "eigenvalues bounded by one");
    } else {
        report.verdicts.push_back("NOT under-damped (a*c^2 >= 4m): the elastic eigenvalue "
                                  "bound is not guaranteed");
    }

    if (p.is_viscoplastic()) {
        const StepSystem plastic = assemble_viscoplastic(p, h, 0.0, Branch::PlasticPositive);
        report.rho_plastic = spectral_radius(
            StepMatrix(plastic.lhs_inverse * plastic.rhs));

        const double bound = p.m / (p.a * *p.eta) + 2.0 * std::sqrt(p.m / p.a);
        report.damping_bound_ok = p.c > 0.0 && p.c < bound;
        if (*report.damping_bound_ok) {
            report.verdicts.push_back("damping inside the viscoplastic bound "
                                      "0 < c < m/(a*eta) + 2*sqrt(m/a): plastic-branch "
                                      "eigenvalues bounded by one");
        } else {
            report.verdicts.push_back("damping OUTSIDE the viscoplastic bound "
                                      "0 < c < m/(a*eta) + 2*sqrt(m/a)");
        }
    }
    return report;
}

std::vector<StepResiduals> equivalence_residuals(const SimulationResult& res,
                                                 const OscillatorParams& p) {
    return equivalence_residuals(res, p, res.forcing_used);
}

std::vector<StepResiduals> equivalence_residuals(const SimulationResult& res,
                                                 const OscillatorParams& p,
                                                 const std::vector<double>& forcing) {
    if (forcing.size() != res.n_steps()) {
        throw InvalidParams("one forcing value per step is required");
    }

    const double h = res.grid.h;
    std::vector<StepResiduals> out;
    out.reserve(res.n_steps());
    for (std::size_t r = 1; r <= res.n_steps(); ++r) {
        const MixedState& prev = res.states[r - 1];
        const MixedState& cur = res.states[r];
        const double f = forcing[r - 1];

        const double t1 = (cur.p_hat - prev.p_hat) / h;
        const double t2 = p.c / h * (cur.u - prev.u);
        const double t3 = (cur.j - prev.j) / h;
        // Scale by the operand magnitudes of each term, not the (possibly
        // cancelled) term values: the impulse j accumulates a standing offset
        // whose representation error alone puts a floor of eps*|j|/h under t3,
        // and likewise for the other difference quotients.
        const double u_mag = std::max(std::abs(cur.u), std::abs(prev.u));
        const double p_mag = std::max(std::abs(cur.p_hat), std::abs(prev.p_hat));
        const double j_mag = std::max(std::abs(cur.j), std::abs(prev.j));
        const double motion_scale =
            std::max({p_mag / h, p.c / h * u_mag, j_mag / h, std::abs(f)});

        const double v1 = p.m * (cur.u - prev.u);
        const double v2 = 0.5 * h * (cur.p_hat + prev.p_hat);
        const double velocity_scale = std::max(p.m * u_mag, 0.5 * h * p_mag);

        out.push_back({relative_residual(t1 + t2 + t3 - f, motion_scale),
                       relative_residual(v1 - v2, velocity_scale)});
    }
    return out;
}

std::string format_report(const StabilityReport& report) {
    std::ostringstream os;
    for (const auto& line : report.verdicts) os << line << "\n";
    os << "rho_elastic=" << format_full(report.rho_elastic) << "\n";
    os << "underdamped=" << (report.underdamped ? "true" : "false") << "\n";
    if (report.rho_plastic) {
        os << "rho_plastic=" << format_full(*report.rho_plastic) << "\n";
    }
    if (report.damping_bound_ok) {
        os << "damping_bound_ok=" << (*report.damping_bound_ok ? "true" : "false") << "\n";
    }
    return os.str();
}

} // namespace mvi
