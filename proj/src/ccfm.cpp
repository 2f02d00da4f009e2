#include "pfl/ccfm.hpp"

#include "pfl/dynamics.hpp"
#include "pfl/errors.hpp"
#include "pfl/format.hpp"
#include "pfl/impact_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pfl {

namespace {

struct Rgb {
  int r, g, b;
};

// Linear scale endpoints of the heatmap.
constexpr Rgb kLowColor{255, 255, 255};
constexpr Rgb kHighColor{8, 48, 107};
constexpr const char* kTransientLineColor = "#d62728";
constexpr const char* kQuasistaticLineColor = "#ff7f0e";

constexpr int kCellWidth = 28;
constexpr int kCellHeight = 36;
constexpr int kLeftMargin = 60;
constexpr int kTopMargin = 30;
constexpr int kLegendWidth = 18;
constexpr int kLegendGap = 30;

std::string hex_color(double fraction) {
  fraction = std::clamp(fraction, 0.0, 1.0);
  auto mix = [&](int lo, int hi) {
    return static_cast<int>(std::lround(lo + (hi - lo) * fraction));
  };
  char buffer[8];
  std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x", mix(kLowColor.r, kHighColor.r),
                mix(kLowColor.g, kHighColor.g), mix(kLowColor.b, kHighColor.b));
  return buffer;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_number(std::string_view cell, std::size_t line, std::size_t column) {
  const std::string copy(cell);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v)) {
    throw ParseError("non-numeric cell '" + copy + "'", line, column);
  }
  return v;
}

}  // namespace

std::string_view to_string(MapSource source) {
  switch (source) {
    case MapSource::model_A: return "model_A";
    case MapSource::model_B1: return "model_B1";
    case MapSource::model_B2: return "model_B2";
    case MapSource::simulated: return "simulated";
    case MapSource::measured_import: return "measured-import";
  }
  return "?";
}

MapSource parse_map_source(std::string_view text) {
  for (MapSource s : {MapSource::model_A, MapSource::model_B1, MapSource::model_B2,
                      MapSource::simulated, MapSource::measured_import}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown map source '" + std::string(text) + "'");
}

void CCFMGrid::validate() const {
  if (positions.empty() || velocities.empty()) {
    throw std::invalid_argument("map needs at least one position and one velocity");
  }
  if (forces.rows() != static_cast<Eigen::Index>(positions.size()) ||
      forces.cols() != static_cast<Eigen::Index>(velocities.size())) {
    throw std::invalid_argument("force matrix does not match the map axes");
  }
  for (std::size_t i = 0; i < velocities.size(); ++i) {
    if (!std::isfinite(velocities[i]) || velocities[i] < 0.0) {
      throw std::invalid_argument("velocities must be finite and >= 0");
    }
    if (i > 0 && !(velocities[i] > velocities[i - 1])) {
      throw std::invalid_argument("velocities must be strictly increasing");
    }
  }
  if (!forces.allFinite() || (forces.size() > 0 && forces.minCoeff() < 0.0)) {
    throw std::invalid_argument("forces must be finite and >= 0");
  }
}

std::optional<std::size_t> CCFMGrid::position_index(std::string_view label) const {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i].label == label) return i;
  }
  return std::nullopt;
}

std::vector<double> velocity_grid(double vmin, double vmax, double vstep) {
  if (!(vstep > 0.0) || !(vmin >= 0.0) || !(vmax >= vmin) || !std::isfinite(vmax)) {
    throw std::invalid_argument("invalid velocity grid");
  }
  const auto count = static_cast<std::size_t>(std::floor((vmax - vmin) / vstep + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Rounded to 12 decimals so that 0.1 + 2 * 0.1 prints as 0.3.
    grid.push_back(std::round((vmin + static_cast<double>(i) * vstep) * 1e12) / 1e12);
  }
  return grid;
}

std::vector<double> default_velocity_grid() { return velocity_grid(0.05, 1.5, 0.05); }

CCFMGrid generate_map(const RobotModel& model, const BodyPartParams& part,
                      const MapRequest& request) {
  if (request.source == MapSource::measured_import) {
    throw std::invalid_argument("measured maps are imported with parse_map_csv()");
  }
  CCFMGrid grid;
  grid.robot = model.name();
  grid.body_part = part.name;
  grid.source = request.source;
  grid.velocities = request.velocities;
  grid.forces.resize(static_cast<Eigen::Index>(request.positions.size()),
                     static_cast<Eigen::Index>(request.velocities.size()));
  if (request.positions.empty() || request.velocities.empty()) {
    throw std::invalid_argument("map needs at least one position and one velocity");
  }

  const std::size_t link =
      request.contact_link.empty() ? model.flange_index()
                                   : model.link_index(request.contact_link).value_or(
                                         std::numeric_limits<std::size_t>::max());
  if (link == std::numeric_limits<std::size_t>::max()) {
    throw std::invalid_argument("unknown contact link '" + request.contact_link + "'");
  }

  for (std::size_t row = 0; row < request.positions.size(); ++row) {
    const std::string& label = request.positions[row];
    MapPosition position{label, Eigen::Vector3d::Zero()};
    const auto ref = model.reference_positions().find(label);
    const auto cfg = request.configurations.find(label);
    const bool has_config = cfg != request.configurations.end();
    if (ref == model.reference_positions().end() && !has_config) {
      throw std::invalid_argument("unknown position '" + label + "'");
    }
    if (ref != model.reference_positions().end()) position.coordinates = ref->second;

    const bool needs_config = request.source == MapSource::model_B2;
    if (needs_config && !has_config) {
      throw std::invalid_argument("position '" + label + "' has no joint configuration");
    }

    double robot_mass = 0.0;
    if (request.source == MapSource::model_B2 ||
        (request.source == MapSource::simulated && has_config)) {
      const auto frames = forward_kinematics(model, cfg->second);
      const Eigen::Vector3d point = frames[link].translation();
      if (ref == model.reference_positions().end()) position.coordinates = point;
      const ContactFrame contact(point, request.direction, model.links()[link].name);
      const ReflectedMass reflected = reflected_mass(model, cfg->second, contact);
      if (!reflected.bounded()) {
        throw ModelError("impact direction is near-singular at position '" + label + "'");
      }
      robot_mass = reflected.kg();
    } else {
      robot_mass = iso_robot_mass(total_moving_mass(model), model.payload_mass() + model.adapter_mass());
    }
    const HumanMass human = request.source == MapSource::model_A
                                ? HumanMass::finite(part.effective_mass)
                                : HumanMass::infinite();
    const double mu = effective_mass(robot_mass, human);

    for (std::size_t col = 0; col < request.velocities.size(); ++col) {
      const double v = request.velocities[col];
      double force = 0.0;
      if (request.source == MapSource::simulated) {
        ImpactConfig sim;
        sim.robot_mass = robot_mass;
        sim.robot_velocity = v;
        sim.human_mass = human;
        sim.stiffness = part.stiffness;
        sim.damping = part.damping;
        const double period = 2.0 * std::numbers::pi * std::sqrt(mu / part.stiffness);
        sim.dt = std::min(request.sim_dt, period / 200.0);
        sim.duration = std::max(request.sim_periods * period, 10.0 * sim.dt);
        const ForceTrace trace = simulate(sim);
        for (const auto& s : trace.samples()) force = std::max(force, s.force);
      } else {
        force = contact_force(v, mu, part.stiffness);
      }
      grid.forces(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = force;
    }
    grid.positions.push_back(std::move(position));
  }
  grid.validate();
  return grid;
}

std::optional<double> lookup_max_velocity(const CCFMGrid& grid, double threshold,
                                          std::string_view position) {
  const auto row = grid.position_index(position);
  if (!row) {
    throw std::invalid_argument("unknown position '" + std::string(position) + "'");
  }
  std::optional<double> best;
  for (std::size_t col = 0; col < grid.velocities.size(); ++col) {
    if (grid.forces(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) > threshold) {
      break;
    }
    best = grid.velocities[col];
  }
  return best;
}

std::string export_map_csv(const CCFMGrid& grid) {
  std::string out = "position";
  for (double v : grid.velocities) out += "," + format_number(v);
  out += "\n";
  for (std::size_t r = 0; r < grid.positions.size(); ++r) {
    out += grid.positions[r].label;
    for (std::size_t c = 0; c < grid.velocities.size(); ++c) {
      out += "," + format_number(grid.forces(static_cast<Eigen::Index>(r),
                                             static_cast<Eigen::Index>(c)));
    }
    out += "\n";
  }
  return out;
}

std::string export_map_svg(const CCFMGrid& grid, const SvgThresholds& thresholds) {
  const auto rows = static_cast<int>(grid.positions.size());
  const auto cols = static_cast<int>(grid.velocities.size());
  double scale_max = grid.forces.size() > 0 ? grid.forces.maxCoeff() : 0.0;
  if (thresholds.transient) scale_max = std::max(scale_max, *thresholds.transient);
  if (thresholds.quasistatic) scale_max = std::max(scale_max, *thresholds.quasistatic);
  if (!(scale_max > 0.0)) scale_max = 1.0;

  const int map_width = cols * kCellWidth;
  const int map_height = rows * kCellHeight;
  const int legend_x = kLeftMargin + map_width + kLegendGap;
  const int width = legend_x + kLegendWidth + 70;
  const int height = kTopMargin + map_height + 50;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<title>" << grid.robot << " / " << grid.body_part << " (" << to_string(grid.source)
      << ")</title>\n";
  svg << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
      << "<stop offset=\"0\" stop-color=\"" << hex_color(0.0) << "\"/>"
      << "<stop offset=\"1\" stop-color=\"" << hex_color(1.0) << "\"/>"
      << "</linearGradient></defs>\n";

  for (int r = 0; r < rows; ++r) {
    const int y = kTopMargin + r * kCellHeight;
    svg << "<text x=\"" << kLeftMargin - 6 << "\" y=\"" << y + kCellHeight / 2 + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << grid.positions[static_cast<std::size_t>(r)].label
        << "</text>\n";
    for (int c = 0; c < cols; ++c) {
      const double f = grid.forces(r, c);
      svg << "<rect class=\"cell\" x=\"" << kLeftMargin + c * kCellWidth << "\" y=\"" << y
          << "\" width=\"" << kCellWidth << "\" height=\"" << kCellHeight << "\" fill=\""
          << hex_color(f / scale_max) << "\"><title>" << format_number(grid.velocities[static_cast<std::size_t>(c)])
          << " m/s: " << format_number(f) << " N</title></rect>\n";
    }
  }
  for (int c = 0; c < cols; ++c) {
    svg << "<text x=\"" << kLeftMargin + c * kCellWidth + kCellWidth / 2 << "\" y=\""
        << kTopMargin + map_height + 14 << "\" text-anchor=\"middle\" font-size=\"8\">"
        << format_number(grid.velocities[static_cast<std::size_t>(c)]) << "</text>\n";
  }
  svg << "<text x=\"" << kLeftMargin + map_width / 2 << "\" y=\"" << kTopMargin + map_height + 34
      << "\" text-anchor=\"middle\" font-size=\"11\">velocity [m/s]</text>\n";

  // Legend: gradient bar with the thresholds marked.
  svg << "<polygon points=\"" << legend_x << "," << kTopMargin << " " << legend_x + kLegendWidth
      << "," << kTopMargin << " " << legend_x + kLegendWidth << "," << kTopMargin + map_height
      << " " << legend_x << "," << kTopMargin + map_height
      << "\" fill=\"url(#scale)\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
  svg << "<text x=\"" << legend_x + kLegendWidth + 4 << "\" y=\"" << kTopMargin + 4
      << "\" font-size=\"9\">" << format_number(scale_max) << " N</text>\n";
  svg << "<text x=\"" << legend_x + kLegendWidth + 4 << "\" y=\"" << kTopMargin + map_height
      << "\" font-size=\"9\">0 N</text>\n";

  auto iso_line = [&](double threshold, const char* color, const char* name) {
    const double ly = kTopMargin + map_height * (1.0 - threshold / scale_max);
    svg << "<line class=\"threshold-" << name << "\" x1=\"" << legend_x - 4 << "\" y1=\"" << ly
        << "\" x2=\"" << legend_x + kLegendWidth + 4 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << legend_x + kLegendWidth + 6 << "\" y=\"" << ly + 3
        << "\" font-size=\"9\" fill=\"" << color << "\">" << format_number(threshold)
        << " N</text>\n";
    // Iso-line through the map: boundary between cells below and above the threshold.
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c + 1 < cols; ++c) {
        const bool below = grid.forces(r, c) <= threshold;
        const bool next_below = grid.forces(r, c + 1) <= threshold;
        if (below != next_below) {
          const int x = kLeftMargin + (c + 1) * kCellWidth;
          svg << "<line class=\"threshold-" << name << "\" x1=\"" << x << "\" y1=\""
              << kTopMargin + r * kCellHeight << "\" x2=\"" << x << "\" y2=\""
              << kTopMargin + (r + 1) * kCellHeight << "\" stroke=\"" << color
              << "\" stroke-width=\"2\"/>\n";
        }
      }
    }
  };
  if (thresholds.transient) iso_line(*thresholds.transient, kTransientLineColor, "transient");
  if (thresholds.quasistatic) {
    iso_line(*thresholds.quasistatic, kQuasistaticLineColor, "quasistatic");
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string export_map(const CCFMGrid& grid, MapFormat format, const SvgThresholds& thresholds) {
  return format == MapFormat::csv ? export_map_csv(grid) : export_map_svg(grid, thresholds);
}

CCFMGrid parse_map_csv(std::string_view text, std::string robot, std::string body_part) {
  CCFMGrid grid;
  grid.robot = std::move(robot);
  grid.body_part = std::move(body_part);
  grid.source = MapSource::measured_import;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (!header_seen) {
      if (cells.front() != "position" || cells.size() < 2) {
        throw ParseError("expected header 'position,<velocities...>'", line_no, 1);
      }
      for (std::size_t i = 1; i < cells.size(); ++i) {
        grid.velocities.push_back(parse_number(cells[i], line_no, i + 1));
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != grid.velocities.size() + 1) {
      throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(grid.velocities.size() + 1),
                       line_no, 1);
    }
    if (cells.front().empty()) throw ParseError("empty position label", line_no, 1);
    grid.positions.push_back({std::string(cells.front()), Eigen::Vector3d::Zero()});
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      row.push_back(parse_number(cells[i], line_no, i + 1));
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("empty map document", 1, 1);
  grid.forces.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(grid.velocities.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      grid.forces(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  grid.validate();
  return grid;
}

}  // namespace pfl
