#pragma once

// Forcing ingestion: analytic sine generators and sampled records, their
// discrete per-step sampling, and the pre-initial applied impulse.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mvi/model.hpp"

namespace mvi {

// ============================================================================
// Errors
// ============================================================================

/// Base of all record-parsing failures; `line_no` is the 1-based physical
/// line of the offending input (0 when no single line is at fault).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg), line_no(line) {}
    std::size_t line_no;
};

/// A data line held something other than two numeric columns.
class MalformedLine : public ParseError {
public:
    using ParseError::ParseError;
};

/// Sample times must be strictly increasing.
class NonMonotonicTime : public ParseError {
public:
    using ParseError::ParseError;
};

/// The input contained no data rows at all.
class EmptyRecord : public ParseError {
public:
    explicit EmptyRecord(const std::string& msg) : ParseError(msg, 0) {}
};

// ============================================================================
// Record type
// ============================================================================

/// How record values turn into applied forces: either the values are forces
/// already, or they are ground accelerations (force = -m * scale * value).
enum class ForcingInterpretation { DirectForce, GroundAcceleration };

/// Analytic sine: amplitude*sin(omega*t) on [0, duration], zero outside.
struct SineSpec {
    double amplitude = 0.0;
    double omega = 0.0;
    double duration = 0.0;
};

/// A loading description: exactly one of an analytic sine or a sampled
/// (time, value) table, plus a scale factor and interpretation.
///
/// Sampled records are evaluated by linear interpolation between samples and
/// are zero outside their time span. `pre_impulse` carries a user-declared
/// impulse accumulated before t = 0 (on top of whatever the t < 0 portion of
/// a sampled record integrates to).
struct ForcingRecord {
    std::optional<SineSpec> sine;
    std::vector<double> times;
    std::vector<double> values;
    double scale = 1.0;
    ForcingInterpretation interpretation = ForcingInterpretation::DirectForce;
    double pre_impulse = 0.0;

    [[nodiscard]] bool is_sine() const { return sine.has_value(); }
};

[[nodiscard]] ForcingRecord sine_forcing(double amplitude, double omega, double duration);
[[nodiscard]] ForcingRecord sampled_forcing(std::vector<double> times, std::vector<double> values);

// ============================================================================
// Operations
// ============================================================================

/// Parses a two-column `time value` table. Columns may be separated by
/// whitespace or commas; blank lines and lines whose first non-blank
/// character is '#' are skipped (they still count for line numbering).
/// Throws MalformedLine / NonMonotonicTime / EmptyRecord.
[[nodiscard]] ForcingRecord parse_record(std::istream& text);
[[nodiscard]] ForcingRecord parse_record(const std::string& text);

/// Renders a sampled record back to the two-column text form with full
/// round-trip precision. parse_record(export_record(r)) reproduces the
/// sample values bit-identically.
[[nodiscard]] std::string export_record(const ForcingRecord& rec);

/// Raw record value at time t: sine evaluation or linear interpolation,
/// zero outside the defined span. No scale or interpretation applied.
[[nodiscard]] double record_value(const ForcingRecord& rec, double t);

/// Applied force at time t with scale and interpretation applied:
/// scale * value(t), or -m * scale * value(t) for ground accelerations.
[[nodiscard]] double forcing_value(const ForcingRecord& rec, double t, double m);

/// Discrete forcing samples for r = 1..n_steps, each taken at the interval
/// end t_r only. The one-step schemes admit exactly one forcing value per
/// interval, so no in-interval quadrature is performed.
[[nodiscard]] std::vector<double> sample_forcing(const ForcingRecord& rec, const TimeGrid& g,
                                                 double m);

/// Impulse of the applied force accumulated before t = 0: the declared
/// `pre_impulse` plus the trapezoidal integral of any t < 0 portion of a
/// sampled record (scaled and interpreted like the rest of the record, with
/// the mass `m` used for the ground-acceleration case). Zero for analytic
/// sines and for records defined only on t >= 0.
[[nodiscard]] double pre_initial_impulse(const ForcingRecord& rec, double m);

} // namespace mvi
