#include "mvi/model.hpp"

#include <cmath>
#include <sstream>

namespace mvi {

namespace {

bool finite(double v) { return std::isfinite(v); }

void error(DiagnosticsList& out, std::string msg) {
    out.push_back({Severity::Error, std::move(msg)});
}

void warning(DiagnosticsList& out, std::string msg) {
    out.push_back({Severity::Warning, std::move(msg)});
}

DiagnosticsList validate_params_only(const OscillatorParams& p) {
    DiagnosticsList out;

    if (!finite(p.m) || p.m <= 0.0) error(out, "mass must be finite and > 0");
    if (!finite(p.a) || p.a <= 0.0) error(out, "flexibility must be finite and > 0");
    if (!finite(p.c) || p.c < 0.0) error(out, "damping must be finite and >= 0");

    if (p.fy.has_value() != p.eta.has_value()) {
        error(out, "yield force and viscosity must be given together or not at all");
    }
    if (p.fy && (!finite(*p.fy) || *p.fy <= 0.0)) error(out, "yield force must be finite and > 0");
    if (p.eta && (!finite(*p.eta) || *p.eta <= 0.0)) error(out, "viscosity must be finite and > 0");

    if (has_errors(out)) return out;

    // Soft stability conditions; violating them keeps the run legal but the
    // amplification eigenvalue bounds are no longer guaranteed.
    if (p.a * p.c * p.c >= 4.0 * p.m) {
        warning(out, "system is not under-damped (a*c^2 >= 4m); the elastic "
                     "amplification eigenvalue bound is not guaranteed");
    }
    if (p.is_viscoplastic()) {
        const double bound = p.m / (p.a * *p.eta) + 2.0 * std::sqrt(p.m / p.a);
        if (p.c >= bound) {
            warning(out, "damping exceeds the viscoplastic stability bound "
                         "c < m/(a*eta) + 2*sqrt(m/a)");
        }
    }
    return out;
}

} // namespace

OscillatorParams elastic_params(double m, double c, double a) {
    return OscillatorParams{m, c, a, std::nullopt, std::nullopt};
}

OscillatorParams viscoplastic_params(double m, double c, double a, double fy, double eta) {
    return OscillatorParams{m, c, a, fy, eta};
}

std::string_view branch_name(Branch b) {
    switch (b) {
        case Branch::Elastic: return "Elastic";
        case Branch::PlasticPositive: return "PlasticPositive";
        case Branch::PlasticNegative: return "PlasticNegative";
    }
    return "Elastic";
}

DiagnosticsList validate_params(const OscillatorParams& p, const TimeGrid& g) {
    DiagnosticsList out = validate_params_only(p);
    if (!finite(g.h) || g.h <= 0.0) error(out, "time step must be finite and > 0");
    if (g.n_steps < 1) error(out, "step count must be >= 1");
    return out;
}

bool has_errors(const DiagnosticsList& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

std::string format_diagnostics(const DiagnosticsList& diags) {
    std::ostringstream os;
    for (const auto& d : diags) {
        os << (d.severity == Severity::Error ? "ERROR: " : "WARNING: ") << d.message << "\n";
    }
    return os.str();
}

void require_valid(const OscillatorParams& p) {
    const DiagnosticsList diags = validate_params_only(p);
    if (has_errors(diags)) throw InvalidParams(format_diagnostics(diags));
}

void require_valid(const OscillatorParams& p, const TimeGrid& g) {
    const DiagnosticsList diags = validate_params(p, g);
    if (has_errors(diags)) throw InvalidParams(format_diagnostics(diags));
}

} // namespace mvi
