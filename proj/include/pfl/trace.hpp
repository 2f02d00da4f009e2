#pragma once

#include "pfl/contact_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfl {

struct ForceSample {
  double time;   // [s]
  double force;  // [N]
};

enum class TraceSource { measured, simulated };

/// Force-time series with strictly increasing timestamps and at least two
/// finite samples.
class ForceTrace {
 public:
  ForceTrace(std::vector<ForceSample> samples, TraceSource source = TraceSource::measured);

  const std::vector<ForceSample>& samples() const { return samples_; }
  TraceSource source() const { return source_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<ForceSample> samples_;
  TraceSource source_;
};

/// Default split between the dynamic and the quasi-static phase [s].
inline constexpr double kDefaultPhaseBoundary = 0.5;
/// Below this force after the phase boundary the contact counts as released [N].
inline constexpr double kContactEndForce = 5.0;
/// Relative slack on limit comparisons. Far below any sensor resolution; keeps a
/// force computed at exactly the limit from failing on integrator round-off.
inline constexpr double kLimitTolerance = 1e-6;

struct TraceVerdict {
  double peak_force = 0.0;
  double peak_time = 0.0;
  std::optional<double> quasistatic_force;  // empty: contact released or no plateau
  double phase_boundary = kDefaultPhaseBoundary;
  bool transient_pass = false;
  std::optional<bool> quasistatic_pass;  // empty when quasistatic_force is

  bool all_pass() const { return transient_pass && quasistatic_pass.value_or(true); }
};

/// Parses CSV with header `time_s,force_N`. Accepts LF or CRLF line endings.
/// Throws ParseError naming the row for non-numeric cells, non-monotone time or
/// fewer than two rows.
ForceTrace parse_trace(std::string_view text, TraceSource source = TraceSource::measured);

/// CSV in the format read by parse_trace(); values use round-trip precision.
std::string write_trace(const ForceTrace& trace);

/// Peak (phase I) and plateau (phase II) evaluation against a body part's limits.
///
/// The plateau is the mean of the last 20% of the samples after the boundary,
/// accepted when the window's standard deviation is below max(5% of the mean,
/// 2 N); an unstable window is halved until it settles or becomes too short.
TraceVerdict evaluate_trace(const ForceTrace& trace, const BodyPartParams& part,
                            double phase_boundary = kDefaultPhaseBoundary);

std::string verdict_to_json(const TraceVerdict& verdict);
std::string verdict_to_text(const TraceVerdict& verdict);

}  // namespace pfl
