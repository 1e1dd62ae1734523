// Command line front end: `mvi simulate|compare|stability`.
//
// All options live on the main application so one flat config file (loaded
// with --config, overridden by explicit flags) can drive every subcommand.
//
// Exit codes: 0 success, 2 configuration/validation error, 3 file I/O
// failure, 4 reference-solver nonconvergence (outputs are still written).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvi/analysis.hpp"
#include "mvi/integrators.hpp"
#include "mvi/loading.hpp"
#include "mvi/model.hpp"
#include "mvi/newmark.hpp"
#include "mvi/postprocess.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNonConvergence = 4;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

bool given(double v) { return !std::isnan(v); }

struct Options {
    double mass = kUnset;
    double damping = 0.0;
    double stiffness = kUnset;
    double flexibility = kUnset;
    double fy = kUnset;
    double eta = kUnset;
    double dt = kUnset;
    double duration = kUnset;
    std::vector<double> sine;
    std::string record_path;
    double scale = 1.0;
    bool ground_accel = false;
    double u0 = 0.0;
    double v0 = 0.0;
    double i0 = 0.0;
    std::string method = "extended-hamilton";
    std::string out_dir = ".";
    bool plot = false;
};

void add_options(CLI::App& app, Options& o) {
    app.add_option("--mass", o.mass, "mass")->required();
    app.add_option("--damping", o.damping, "viscous damping coefficient (default 0)");
    auto* stiffness = app.add_option("--stiffness", o.stiffness, "spring stiffness k");
    auto* flexibility =
        app.add_option("--flexibility", o.flexibility, "spring flexibility a = 1/k");
    stiffness->excludes(flexibility);
    flexibility->excludes(stiffness);
    app.add_option("--fy", o.fy, "yield force (viscoplastic model)");
    app.add_option("--eta", o.eta, "slider regularization viscosity (viscoplastic model)");
    app.add_option("--dt", o.dt, "time step")->required();
    app.add_option("--duration", o.duration, "analysis time (n_steps * dt)");
    app.add_option("--sine", o.sine,
                   "analytic sine forcing: amplitude, angular frequency, loading duration")
        ->expected(3);
    app.add_option("--record", o.record_path, "path to a sampled forcing record");
    app.add_option("--scale", o.scale, "forcing scale factor (default 1)");
    app.add_flag("--as-ground-accel", o.ground_accel,
                 "treat record values as ground acceleration (force = -m*scale*value)");
    app.add_option("--u0", o.u0, "initial displacement");
    app.add_option("--v0", o.v0, "initial velocity");
    app.add_option("--i0", o.i0, "impulse applied before t = 0");
    app.add_option("--method", o.method, "integrator: extended-hamilton, newmark or both")
        ->check(CLI::IsMember({"extended-hamilton", "newmark", "both"}));
    app.add_option("--out", o.out_dir, "output directory (default .)");
    app.add_flag("--plot", o.plot, "emit SVG plots next to the CSV output");
    app.set_config("--config", "", "read options from a config file (flags take precedence)");
}

mvi::OscillatorParams make_params(const Options& o) {
    if (given(o.stiffness) == given(o.flexibility)) {
        throw mvi::InvalidParams("exactly one of --stiffness or --flexibility is required");
    }
    mvi::OscillatorParams p;
    p.m = o.mass;
    p.c = o.damping;
    p.a = given(o.flexibility) ? o.flexibility : 1.0 / o.stiffness;
    if (given(o.fy)) p.fy = o.fy;
    if (given(o.eta)) p.eta = o.eta;
    return p;
}

mvi::TimeGrid make_grid(const Options& o) {
    if (!std::isfinite(o.dt) || o.dt <= 0.0) throw mvi::InvalidParams("--dt must be > 0");
    if (!std::isfinite(o.duration) || o.duration <= 0.0) {
        throw mvi::InvalidParams("--duration must be given and > 0");
    }
    mvi::TimeGrid g;
    g.h = o.dt;
    g.n_steps = static_cast<std::size_t>(std::llround(o.duration / o.dt));
    if (g.n_steps < 1 || std::abs(g.total_time() - o.duration) > o.dt) {
        throw mvi::InvalidParams(
            "--duration must cover a whole number of steps (n_steps * dt, n_steps >= 1)");
    }
    return g;
}

mvi::ForcingRecord make_forcing(const Options& o) {
    const bool has_sine = !o.sine.empty();
    const bool has_record = !o.record_path.empty();
    if (has_sine == has_record) {
        throw mvi::InvalidParams("exactly one forcing is required: --sine or --record");
    }

    mvi::ForcingRecord rec;
    if (has_sine) {
        rec = mvi::sine_forcing(o.sine[0], o.sine[1], o.sine[2]);
    } else {
        std::ifstream is(o.record_path, std::ios::binary);
        if (!is) throw IoError("cannot read record file: " + o.record_path);
        rec = mvi::parse_record(is);
    }
    rec.scale = o.scale;
    rec.interpretation = o.ground_accel ? mvi::ForcingInterpretation::GroundAcceleration
                                        : mvi::ForcingInterpretation::DirectForce;
    return rec;
}

mvi::InitialConditions make_initial(const Options& o) {
    mvi::InitialConditions ic;
    ic.u0 = o.u0;
    ic.v0 = o.v0;
    ic.i0 = o.i0;
    return ic;
}

// Aborts on hard validation errors; prints warnings and carries on otherwise.
void check_params(const mvi::OscillatorParams& p, const mvi::TimeGrid& g) {
    const mvi::DiagnosticsList diags = mvi::validate_params(p, g);
    if (mvi::has_errors(diags)) throw mvi::InvalidParams(mvi::format_diagnostics(diags));
    if (!diags.empty()) std::cerr << mvi::format_diagnostics(diags);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << content;
    os.flush();
    if (!os.good()) throw IoError("failed while writing: " + path.string());
}

fs::path prepare_out_dir(const Options& o) {
    const fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory: " + dir.string());
    }
    return dir;
}

mvi::SimulationResult run_reference(const mvi::OscillatorParams& p, const mvi::TimeGrid& g,
                                    const mvi::ForcingRecord& rec,
                                    const mvi::InitialConditions& ic) {
    return p.is_viscoplastic() ? mvi::newmark_viscoplastic(p, g, rec, ic)
                               : mvi::newmark_linear(p, g, rec, ic);
}

std::size_t plastic_steps(const mvi::SimulationResult& res) {
    return static_cast<std::size_t>(
        std::count_if(res.branch_labels.begin(), res.branch_labels.end(),
                      [](mvi::Branch b) { return b != mvi::Branch::Elastic; }));
}

double peak_abs_u(const mvi::SimulationResult& res) {
    double peak = 0.0;
    for (const auto& s : res.states) peak = std::max(peak, std::abs(s.u));
    return peak;
}

std::string summary_block(const std::string& name, const mvi::SimulationResult& res) {
    const mvi::MixedState& last = res.final_state();
    std::ostringstream os;
    os << "run: " << name << "\n";
    os << "steps=" << res.n_steps() << " dt=" << mvi::format_full(res.grid.h) << "\n";
    os << "t_N=" << mvi::format_full(res.grid.total_time()) << "\n";
    os << "u(t_N)=" << mvi::format_full(last.u) << "\n";
    os << "p_hat(t_N)=" << mvi::format_full(last.p_hat) << "\n";
    os << "J(t_N)=" << mvi::format_full(last.j) << "\n";
    os << "u1_hat(t_N)=" << mvi::format_full(last.u1_hat) << "\n";
    os << "max_abs_u=" << mvi::format_full(peak_abs_u(res)) << "\n";
    os << "plastic_steps=" << plastic_steps(res) << "\n";
    os << "nonconverged_steps=" << res.nonconverged_steps.size() << "\n";
    return os.str();
}

std::string difference_block(const mvi::SimulationResult& a, const mvi::SimulationResult& b) {
    double max_diff = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < a.states.size(); ++r) {
        const double d = a.states[r].u - b.states[r].u;
        max_diff = std::max(max_diff, std::abs(d));
        sum_sq += d * d;
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(a.states.size()));
    const double peak = std::max(peak_abs_u(a), peak_abs_u(b));

    std::ostringstream os;
    os << "comparison: extended-hamilton vs newmark\n";
    os << "peak_abs_u=" << mvi::format_full(peak) << "\n";
    os << "max_abs_diff=" << mvi::format_full(max_diff) << "\n";
    os << "rms_diff=" << mvi::format_full(rms) << "\n";
    if (peak > 0.0) {
        os << "max_diff_over_peak=" << mvi::format_full(max_diff / peak) << "\n";
        os << "rms_diff_over_peak=" << mvi::format_full(rms / peak) << "\n";
    }
    return os.str();
}

void write_run_outputs(const fs::path& dir, const std::string& name,
                       const mvi::SimulationResult& res, bool plot) {
    write_file(dir / (name + ".csv"), mvi::export_csv(res));
    if (plot && res.n_steps() > 0) {
        const mvi::HysteresisSeries hys = mvi::hysteresis(res);
        write_file(dir / (name + "-history.svg"),
                   mvi::emit_plot(res, hys, mvi::PlotKind::History, name));
        write_file(dir / (name + "-hysteresis.svg"),
                   mvi::emit_plot(res, hys, mvi::PlotKind::Hysteresis, name));
    }
}

int finish(const std::vector<const mvi::SimulationResult*>& results) {
    for (const auto* res : results) {
        if (!res->nonconverged_steps.empty()) {
            std::cerr << "newmark reference: Newton-Raphson hit the iteration cap on "
                      << res->nonconverged_steps.size() << " step(s)\n";
            return kExitNonConvergence;
        }
    }
    return kExitOk;
}

int run_simulate(const Options& o) {
    const mvi::OscillatorParams p = make_params(o);
    const mvi::TimeGrid g = make_grid(o);
    check_params(p, g);
    const mvi::ForcingRecord rec = make_forcing(o);
    const mvi::InitialConditions ic = make_initial(o);
    const fs::path dir = prepare_out_dir(o);

    std::string summary;
    std::vector<const mvi::SimulationResult*> results;

    std::optional<mvi::SimulationResult> main_run;
    std::optional<mvi::SimulationResult> reference_run;

    if (o.method == "extended-hamilton" || o.method == "both") {
        main_run = mvi::simulate(p, g, rec, ic);
        write_run_outputs(dir, "extended-hamilton", *main_run, o.plot);
        summary += summary_block("extended-hamilton", *main_run);
        results.push_back(&*main_run);
    }
    if (o.method == "newmark" || o.method == "both") {
        reference_run = run_reference(p, g, rec, ic);
        write_run_outputs(dir, "newmark", *reference_run, o.plot);
        if (!summary.empty()) summary += "\n";
        summary += summary_block("newmark", *reference_run);
        results.push_back(&*reference_run);
    }
    if (main_run && reference_run) {
        summary += "\n" + difference_block(*main_run, *reference_run);
    }

    write_file(dir / "summary.txt", summary);
    std::cout << summary;
    return finish(results);
}

int run_compare(const Options& o) {
    const mvi::OscillatorParams p = make_params(o);
    const mvi::TimeGrid g = make_grid(o);
    check_params(p, g);
    const mvi::ForcingRecord rec = make_forcing(o);
    const mvi::InitialConditions ic = make_initial(o);
    const fs::path dir = prepare_out_dir(o);

    const mvi::SimulationResult main_run = mvi::simulate(p, g, rec, ic);
    const mvi::SimulationResult reference_run = run_reference(p, g, rec, ic);

    write_run_outputs(dir, "extended-hamilton", main_run, o.plot);
    write_run_outputs(dir, "newmark", reference_run, o.plot);
    if (o.plot) {
        write_file(dir / "overlay-history.svg",
                   mvi::emit_overlay_plot(main_run, "extended-hamilton", reference_run,
                                          "newmark", mvi::PlotKind::History));
        write_file(dir / "overlay-hysteresis.svg",
                   mvi::emit_overlay_plot(main_run, "extended-hamilton", reference_run,
                                          "newmark", mvi::PlotKind::Hysteresis));
    }

    std::string report = summary_block("extended-hamilton", main_run);
    report += "\n" + summary_block("newmark", reference_run);
    report += "\n" + difference_block(main_run, reference_run);
    write_file(dir / "compare.txt", report);
    std::cout << report;
    return finish({&main_run, &reference_run});
}

int run_stability(const Options& o) {
    const mvi::OscillatorParams p = make_params(o);
    if (!std::isfinite(o.dt) || o.dt <= 0.0) throw mvi::InvalidParams("--dt must be > 0");
    mvi::require_valid(p);
    std::cout << mvi::format_report(mvi::stability_report(p, o.dt));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed variational one-step time integration for a forced damped oscillator "
                 "and an elastic-viscoplastic system, with a Newmark reference solver"};
    app.require_subcommand(1);

    Options options;
    add_options(app, options);

    CLI::App* sim = app.add_subcommand("simulate", "run one or both integrators, write CSV");
    CLI::App* cmp = app.add_subcommand("compare", "run both integrators and report differences");
    CLI::App* stab = app.add_subcommand("stability", "evaluate the stability conditions");
    for (CLI::App* sub : {sim, cmp, stab}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (sim->parsed()) return run_simulate(options);
        if (cmp->parsed()) return run_compare(options);
        return run_stability(options);
    } catch (const IoError& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        if (msg.rfind("ERROR:", 0) == 0) {
            std::cerr << msg;  // diagnostics already carry severity prefixes
            if (msg.empty() || msg.back() != '\n') std::cerr << "\n";
        } else {
            std::cerr << "ERROR: " << msg << "\n";
        }
        return kExitValidation;
    }
}
