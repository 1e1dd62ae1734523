#include "mvi/loading.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace mvi {

namespace {

bool is_blank_or_comment(const std::string& line) {
    for (char ch : line) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        return ch == '#';
    }
    return true;
}

// Parses exactly two doubles from a line; commas count as separators.
bool parse_two_numbers(const std::string& line, double& t, double& v) {
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');

    const char* s = cleaned.c_str();
    char* end = nullptr;
    t = std::strtod(s, &end);
    if (end == s) return false;
    s = end;
    v = std::strtod(s, &end);
    if (end == s) return false;
    for (s = end; *s != '\0'; ++s) {
        if (!std::isspace(static_cast<unsigned char>(*s))) return false;
    }
    return std::isfinite(t) && std::isfinite(v);
}

double interpolate(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
    if (ts.empty() || t < ts.front() || t > ts.back()) return 0.0;
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return vs.front();
    if (it == ts.end()) return vs.back();
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    if (t == ts[lo]) return vs[lo];
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return vs[lo] + w * (vs[hi] - vs[lo]);
}

} // namespace

ForcingRecord sine_forcing(double amplitude, double omega, double duration) {
    if (!std::isfinite(amplitude) || !std::isfinite(omega) || !std::isfinite(duration) ||
        duration < 0.0) {
        throw InvalidParams("sine forcing requires finite values and duration >= 0");
    }
    ForcingRecord rec;
    rec.sine = SineSpec{amplitude, omega, duration};
    return rec;
}

ForcingRecord sampled_forcing(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size()) {
        throw InvalidParams("sampled forcing needs matching time and value counts");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
            throw InvalidParams("sampled forcing values must be finite");
        }
        if (i > 0 && times[i] <= times[i - 1]) {
            throw InvalidParams("sampled forcing times must be strictly increasing");
        }
    }
    if (times.empty()) throw InvalidParams("sampled forcing needs at least one sample");
    ForcingRecord rec;
    rec.times = std::move(times);
    rec.values = std::move(values);
    return rec;
}

ForcingRecord parse_record(std::istream& text) {
    ForcingRecord rec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(text, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank_or_comment(line)) continue;

        double t = 0.0;
        double v = 0.0;
        if (!parse_two_numbers(line, t, v)) {
            throw MalformedLine("expected two numeric columns on line " +
                                    std::to_string(line_no),
                                line_no);
        }
        if (!rec.times.empty() && t <= rec.times.back()) {
            throw NonMonotonicTime("sample time does not increase on line " +
                                       std::to_string(line_no),
                                   line_no);
        }
        rec.times.push_back(t);
        rec.values.push_back(v);
    }
    if (rec.times.empty()) throw EmptyRecord("record contains no data rows");
    return rec;
}

ForcingRecord parse_record(const std::string& text) {
    std::istringstream is(text);
    return parse_record(is);
}

std::string export_record(const ForcingRecord& rec) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", rec.times[i], rec.values[i]);
        out += buf;
    }
    return out;
}

double record_value(const ForcingRecord& rec, double t) {
    if (rec.sine) {
        if (t < 0.0 || t > rec.sine->duration) return 0.0;
        return rec.sine->amplitude * std::sin(rec.sine->omega * t);
    }
    return interpolate(rec.times, rec.values, t);
}

double forcing_value(const ForcingRecord& rec, double t, double m) {
    const double v = rec.scale * record_value(rec, t);
    return rec.interpretation == ForcingInterpretation::GroundAcceleration ? -m * v : v;
}

std::vector<double> sample_forcing(const ForcingRecord& rec, const TimeGrid& g, double m) {
    std::vector<double> out;
    out.reserve(g.n_steps);
    for (std::size_t r = 1; r <= g.n_steps; ++r) {
        out.push_back(forcing_value(rec, g.time_at(r), m));
    }
    return out;
}

double pre_initial_impulse(const ForcingRecord& rec, double m) {
    double impulse = rec.pre_impulse;
    if (!rec.sine && !rec.times.empty() && rec.times.front() < 0.0) {
        // Trapezoidal integral of the record's t < 0 portion. The record is
        // zero outside its span, so integration stops at the last sample when
        // the whole record lies below t = 0.
        const double t_end = std::min(0.0, rec.times.back());
        double prev_t = rec.times.front();
        double prev_f = forcing_value(rec, prev_t, m);
        for (std::size_t i = 1; i < rec.times.size() && rec.times[i] <= t_end; ++i) {
            const double f = forcing_value(rec, rec.times[i], m);
            impulse += 0.5 * (prev_f + f) * (rec.times[i] - prev_t);
            prev_t = rec.times[i];
            prev_f = f;
        }
        if (prev_t < t_end) {
            impulse += 0.5 * (prev_f + forcing_value(rec, t_end, m)) * (t_end - prev_t);
        }
    }
    return impulse;
}

} // namespace mvi
