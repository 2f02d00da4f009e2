#include "pfl/trace.hpp"

#include "json_util.hpp"
#include "pfl/errors.hpp"
#include "pfl/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace pfl {

namespace {

constexpr double kPlateauWindowFraction = 0.2;
constexpr double kPlateauRelativeSpread = 0.05;
constexpr double kPlateauAbsoluteSpread = 2.0;
constexpr std::size_t kMinPlateauSamples = 2;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t line, std::size_t column) {
  cell = trim(cell);
  const std::string copy(cell);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(value)) {
    throw ParseError("non-numeric cell '" + copy + "'", line, column);
  }
  return value;
}

}  // namespace

ForceTrace::ForceTrace(std::vector<ForceSample> samples, TraceSource source)
    : samples_(std::move(samples)), source_(source) {
  if (samples_.size() < 2) {
    throw std::invalid_argument("a force trace needs at least two samples");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].time) || !std::isfinite(samples_[i].force)) {
      throw std::invalid_argument("sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(samples_[i].time > samples_[i - 1].time)) {
      throw std::invalid_argument("sample " + std::to_string(i) + " breaks time monotonicity");
    }
  }
}

ForceTrace parse_trace(std::string_view text, TraceSource source) {
  std::vector<ForceSample> samples;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (!header_seen) {
      std::string_view header = line;
      if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
      const std::size_t comma = header.find(',');
      if (comma == std::string_view::npos || trim(header.substr(0, comma)) != "time_s" ||
          trim(header.substr(comma + 1)) != "force_N") {
        throw ParseError("expected header 'time_s,force_N'", line_no, 1);
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected exactly two columns", line_no, 1);
    }
    const double t = parse_cell(line.substr(0, comma), line_no, 1);
    const double f = parse_cell(line.substr(comma + 1), line_no, comma + 2);
    if (!samples.empty() && !(t > samples.back().time)) {
      throw ParseError("time is not strictly increasing at data row " +
                           std::to_string(samples.size() + 1),
                       line_no, 1);
    }
    samples.push_back({t, f});
  }
  if (!header_seen) {
    throw ParseError("missing header 'time_s,force_N'", 1, 1);
  }
  if (samples.size() < 2) {
    throw ParseError("a force trace needs at least two rows", line_no == 0 ? 1 : line_no, 1);
  }
  return ForceTrace(std::move(samples), source);
}

std::string write_trace(const ForceTrace& trace) {
  std::string out = "time_s,force_N\n";
  char buffer[64];
  for (const auto& s : trace.samples()) {
    std::snprintf(buffer, sizeof buffer, "%.17g,%.17g\n", s.time, s.force);
    out += buffer;
  }
  return out;
}

TraceVerdict evaluate_trace(const ForceTrace& trace, const BodyPartParams& part,
                            double phase_boundary) {
  const auto& samples = trace.samples();
  TraceVerdict verdict;
  verdict.phase_boundary = phase_boundary;

  const auto peak = std::max_element(samples.begin(), samples.end(),
                                     [](const auto& a, const auto& b) { return a.force < b.force; });
  verdict.peak_force = peak->force;
  verdict.peak_time = peak->time;
  verdict.transient_pass =
      verdict.peak_force <= part.transient_force_limit * (1.0 + kLimitTolerance);

  const auto first_after = std::upper_bound(
      samples.begin(), samples.end(), phase_boundary,
      [](double t, const ForceSample& s) { return t < s.time; });
  const auto after = static_cast<std::size_t>(std::distance(first_after, samples.end()));

  std::size_t window =
      std::max<std::size_t>(kMinPlateauSamples,
                            static_cast<std::size_t>(std::ceil(kPlateauWindowFraction * after)));
  while (after >= kMinPlateauSamples && window >= kMinPlateauSamples && window <= after) {
    const auto begin = samples.end() - static_cast<std::ptrdiff_t>(window);
    const double mean =
        std::accumulate(begin, samples.end(), 0.0,
                        [](double acc, const ForceSample& s) { return acc + s.force; }) /
        static_cast<double>(window);
    if (mean < kContactEndForce) break;
    double squares = 0.0;
    for (auto it = begin; it != samples.end(); ++it) {
      squares += (it->force - mean) * (it->force - mean);
    }
    const double stddev = std::sqrt(squares / static_cast<double>(window - 1));
    if (stddev < std::max(kPlateauRelativeSpread * mean, kPlateauAbsoluteSpread)) {
      verdict.quasistatic_force = mean;
      break;
    }
    window /= 2;
  }
  if (verdict.quasistatic_force) {
    verdict.quasistatic_pass = *verdict.quasistatic_force <=
                               part.quasistatic_force_limit * (1.0 + kLimitTolerance);
  }
  return verdict;
}

std::string verdict_to_json(const TraceVerdict& v) {
  using detail::json;
  json root = {
      {"peak_force_N", round_significant(v.peak_force)},
      {"peak_time_s", round_significant(v.peak_time)},
      {"quasistatic_force_N",
       v.quasistatic_force ? json(round_significant(*v.quasistatic_force)) : json("none")},
      {"phase_boundary_s", round_significant(v.phase_boundary)},
      {"transient_pass", v.transient_pass},
      {"quasistatic_pass", v.quasistatic_pass ? json(*v.quasistatic_pass) : json("n/a")},
  };
  return root.dump(2) + "\n";
}

std::string verdict_to_text(const TraceVerdict& v) {
  std::ostringstream out;
  out << "peak force: " << format_number(v.peak_force) << " N at "
      << format_number(v.peak_time) << " s\n";
  out << "quasi-static force: "
      << (v.quasistatic_force ? format_number(*v.quasistatic_force) + " N" : std::string("none"))
      << " (boundary " << format_number(v.phase_boundary) << " s)\n";
  out << "transient: " << (v.transient_pass ? "pass" : "fail") << "\n";
  out << "quasi-static: "
      << (v.quasistatic_pass ? (*v.quasistatic_pass ? "pass" : "fail") : "n/a") << "\n";
  return out.str();
}

}  // namespace pfl
