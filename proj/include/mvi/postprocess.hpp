#pragma once

// Post-processing: hysteresis series, CSV export and static SVG plots.
// All emitters are deterministic: identical inputs give identical bytes.

#include <string>
#include <vector>

#include "mvi/model.hpp"

namespace mvi {

/// Per-step hysteresis quantities: the average displacement over the
/// interval, ua_r = (u_{r-1} + u_r)/2, and the representative internal
/// force, f_r = (j_r - j_{r-1})/h.
struct HysteresisSeries {
    std::vector<double> ua;
    std::vector<double> f;
};

/// Computes both series. Throws EmptyResult for zero-step results.
[[nodiscard]] HysteresisSeries hysteresis(const SimulationResult& res);

/// CSV with header `t,u,p_hat,J,u1_hat,branch,f_applied,ua,F`: one initial
/// row (step-scoped columns empty) plus one row per step. Numbers use full
/// round-trip precision scientific notation.
[[nodiscard]] std::string export_csv(const SimulationResult& res);
[[nodiscard]] std::string export_csv(const SimulationResult& res, const HysteresisSeries& hys);

enum class PlotKind { History, Hysteresis };

/// One polyline on a plot. `dashed` selects a dotted stroke so overlaid
/// integrators remain distinguishable.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

/// Self-contained SVG document with axes, tick labels and a legend.
/// Throws EmptyResult when no series carries at least two points.
[[nodiscard]] std::string render_svg(const std::vector<PlotSeries>& series,
                                     const std::string& title, const std::string& x_label,
                                     const std::string& y_label);

/// History (u vs t) or hysteresis (F vs ua) plot of a single run; `label`
/// names the integrator in the legend.
[[nodiscard]] std::string emit_plot(const SimulationResult& res, const HysteresisSeries& hys,
                                    PlotKind kind, const std::string& label);

/// Overlay of two runs of the same scenario: the first series is drawn
/// dotted, the second solid.
[[nodiscard]] std::string emit_overlay_plot(const SimulationResult& a, const std::string& label_a,
                                            const SimulationResult& b, const std::string& label_b,
                                            PlotKind kind);

/// Full precision scientific formatting used by all emitters ("%.17e").
[[nodiscard]] std::string format_full(double v);

} // namespace mvi
