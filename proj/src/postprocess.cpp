#include "mvi/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mvi {

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string format_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    // Pads the range so flat series still get a drawable band.
    void finalize() {
        if (lo > hi) {
            lo = 0.0;
            hi = 1.0;
            return;
        }
        const double span = hi - lo;
        const double pad = span > 0.0 ? 0.05 * span : std::max(1.0, std::abs(lo)) * 0.05;
        lo -= pad;
        hi += pad;
    }

    [[nodiscard]] double map(double v, double pix_lo, double pix_hi) const {
        return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
    }
};

const char* series_color(std::size_t index) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    return colors[index % 4];
}

} // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

HysteresisSeries hysteresis(const SimulationResult& res) {
    if (res.n_steps() == 0 || res.states.size() != res.n_steps() + 1) {
        throw EmptyResult("hysteresis needs at least one step");
    }
    const double h = res.grid.h;
    HysteresisSeries out;
    out.ua.reserve(res.n_steps());
    out.f.reserve(res.n_steps());
    for (std::size_t r = 1; r < res.states.size(); ++r) {
        out.ua.push_back(0.5 * (res.states[r - 1].u + res.states[r].u));
        out.f.push_back((res.states[r].j - res.states[r - 1].j) / h);
    }
    return out;
}

std::string export_csv(const SimulationResult& res) {
    if (res.n_steps() == 0) return export_csv(res, HysteresisSeries{});
    return export_csv(res, hysteresis(res));
}

std::string export_csv(const SimulationResult& res, const HysteresisSeries& hys) {
    if (res.states.empty()) throw EmptyResult("result carries no states");
    if (hys.ua.size() != res.n_steps() || hys.f.size() != res.n_steps()) {
        throw InvalidParams("hysteresis length must match the step count");
    }

    std::string out = "t,u,p_hat,J,u1_hat,branch,f_applied,ua,F\n";
    for (std::size_t r = 0; r < res.states.size(); ++r) {
        const MixedState& s = res.states[r];
        out += format_full(res.grid.time_at(r));
        out += ',';
        out += format_full(s.u);
        out += ',';
        out += format_full(s.p_hat);
        out += ',';
        out += format_full(s.j);
        out += ',';
        out += format_full(s.u1_hat);
        if (r == 0) {
            // Step-scoped columns are undefined at the initial node.
            out += ",,,,\n";
            continue;
        }
        out += ',';
        out += branch_name(res.branch_labels[r - 1]);
        out += ',';
        out += format_full(res.forcing_used[r - 1]);
        out += ',';
        out += format_full(hys.ua[r - 1]);
        out += ',';
        out += format_full(hys.f[r - 1]);
        out += '\n';
    }
    return out;
}

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
    bool drawable = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw InvalidParams("series x/y lengths differ");
        if (s.x.size() >= 2) drawable = true;
    }
    if (!drawable) throw EmptyResult("nothing to plot");

    constexpr double width = 880.0;
    constexpr double height = 560.0;
    constexpr double left = 90.0;
    constexpr double right = width - 30.0;
    constexpr double top = 50.0;
    constexpr double bottom = height - 70.0;

    Range xr;
    Range yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    xr.finalize();
    yr.finalize();

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << (width / 2) << "\" y=\"28\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">"
       << escape_xml(title) << "</text>\n";

    // Axes box.
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << (right - left)
       << "\" height=\"" << (bottom - top)
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // Ticks: five per axis, linearly spaced.
    constexpr int n_ticks = 5;
    for (int i = 0; i < n_ticks; ++i) {
        const double fraction = static_cast<double>(i) / (n_ticks - 1);
        const double xv = xr.lo + fraction * (xr.hi - xr.lo);
        const double xp = xr.map(xv, left, right);
        os << "<line x1=\"" << format_coord(xp) << "\" y1=\"" << bottom << "\" x2=\""
           << format_coord(xp) << "\" y2=\"" << (bottom + 6) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << format_coord(xp) << "\" y=\"" << (bottom + 22)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           << format_tick(xv) << "</text>\n";

        const double yv = yr.lo + fraction * (yr.hi - yr.lo);
        const double yp = yr.map(yv, bottom, top);
        os << "<line x1=\"" << (left - 6) << "\" y1=\"" << format_coord(yp) << "\" x2=\"" << left
           << "\" y2=\"" << format_coord(yp) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << (left - 10) << "\" y=\"" << format_coord(yp + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
           << format_tick(yv) << "</text>\n";
    }

    os << "<text x=\"" << ((left + right) / 2) << "\" y=\"" << (height - 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << escape_xml(x_label) << "</text>\n";
    os << "<text x=\"24\" y=\"" << ((top + bottom) / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
          "transform=\"rotate(-90 24 "
       << ((top + bottom) / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        if (s.x.size() < 2) continue;
        os << "<polyline fill=\"none\" stroke=\"" << series_color(si)
           << "\" stroke-width=\"1.2\"";
        if (s.dashed) os << " stroke-dasharray=\"2 5\"";
        os << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i > 0) os << ' ';
            os << format_coord(xr.map(s.x[i], left, right)) << ','
               << format_coord(yr.map(s.y[i], bottom, top));
        }
        os << "\"/>\n";
    }

    // Legend, top-right inside the axes box.
    const double legend_x = right - 230.0;
    double legend_y = top + 16.0;
    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        os << "<line x1=\"" << legend_x << "\" y1=\"" << format_coord(legend_y - 4) << "\" x2=\""
           << (legend_x + 34) << "\" y2=\"" << format_coord(legend_y - 4) << "\" stroke=\""
           << series_color(si) << "\" stroke-width=\"1.2\"";
        if (s.dashed) os << " stroke-dasharray=\"2 5\"";
        os << "/>\n";
        os << "<text x=\"" << (legend_x + 42) << "\" y=\"" << format_coord(legend_y)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label)
           << "</text>\n";
        legend_y += 18.0;
    }

    os << "</svg>\n";
    return os.str();
}

namespace {

PlotSeries history_series(const SimulationResult& res, const std::string& label, bool dashed) {
    PlotSeries s;
    s.label = label;
    s.dashed = dashed;
    s.x.reserve(res.states.size());
    s.y.reserve(res.states.size());
    for (std::size_t r = 0; r < res.states.size(); ++r) {
        s.x.push_back(res.grid.time_at(r));
        s.y.push_back(res.states[r].u);
    }
    return s;
}

PlotSeries hysteresis_series(const HysteresisSeries& hys, const std::string& label, bool dashed) {
    PlotSeries s;
    s.label = label;
    s.dashed = dashed;
    s.x = hys.ua;
    s.y = hys.f;
    return s;
}

} // namespace

std::string emit_plot(const SimulationResult& res, const HysteresisSeries& hys, PlotKind kind,
                      const std::string& label) {
    if (res.n_steps() == 0) throw EmptyResult("plot needs at least one step");
    if (kind == PlotKind::History) {
        return render_svg({history_series(res, label, false)}, "Displacement history", "time",
                          "displacement");
    }
    return render_svg({hysteresis_series(hys, label, false)}, "Hysteresis",
                      "average displacement", "internal force");
}

std::string emit_overlay_plot(const SimulationResult& a, const std::string& label_a,
                              const SimulationResult& b, const std::string& label_b,
                              PlotKind kind) {
    if (a.n_steps() == 0 || b.n_steps() == 0) throw EmptyResult("plot needs at least one step");
    if (kind == PlotKind::History) {
        return render_svg({history_series(a, label_a, true), history_series(b, label_b, false)},
                          "Displacement history", "time", "displacement");
    }
    return render_svg({hysteresis_series(hysteresis(a), label_a, true),
                       hysteresis_series(hysteresis(b), label_b, false)},
                      "Hysteresis", "average displacement", "internal force");
}

} // namespace mvi
