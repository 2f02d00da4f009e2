#pragma once

#include "pfl/contact_model.hpp"
#include "pfl/robot_model.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfl {

enum class MapSource { model_A, model_B1, model_B2, simulated, measured_import };

std::string_view to_string(MapSource source);
MapSource parse_map_source(std::string_view text);

struct MapPosition {
  std::string label;
  Eigen::Vector3d coordinates = Eigen::Vector3d::Zero();  // [m], base frame
};

/// Constrained collision force map: expected peak force per (position, velocity).
struct CCFMGrid {
  std::string robot;
  std::string body_part;
  std::vector<MapPosition> positions;
  std::vector<double> velocities;  // strictly increasing [m/s]
  Eigen::MatrixXd forces;          // positions x velocities [N]
  MapSource source = MapSource::model_B1;

  /// Throws std::invalid_argument on dimension, ordering or sign violations.
  void validate() const;
  std::optional<std::size_t> position_index(std::string_view label) const;
};

/// Inputs of generate_map().
struct MapRequest {
  MapSource source = MapSource::model_B1;
  std::vector<std::string> positions;
  std::vector<double> velocities;
  /// Joint configuration per position label; required by model_B2, optional
  /// for simulated (the simplified robot mass is used without one).
  std::map<std::string, JointConfiguration> configurations;
  /// Impact direction for reflected-mass evaluation.
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
  /// Link carrying the contact point; the flange when empty. The contact point
  /// is that link's origin at the position's configuration.
  std::string contact_link;
  double sim_dt = 1e-5;
  /// Simulated duration as a multiple of the undamped contact period.
  double sim_periods = 1.0;
};

/// Velocity grid from vmin to vmax (inclusive, within half a step) in steps of vstep.
std::vector<double> velocity_grid(double vmin, double vmax, double vstep);

/// Default grid 0.05 .. 1.5 m/s in 0.05 m/s steps.
std::vector<double> default_velocity_grid();

/// Builds a map for one body part. Model sources evaluate the closed-form peak;
/// the simulated source takes the peak of an impact simulation against a clamped
/// body part. Throws std::invalid_argument for unknown positions or missing
/// configurations.
CCFMGrid generate_map(const RobotModel& model, const BodyPartParams& part,
                      const MapRequest& request);

/// Largest grid velocity whose force does not exceed `threshold`; empty when
/// even the smallest grid velocity exceeds it. No interpolation between cells.
std::optional<double> lookup_max_velocity(const CCFMGrid& grid, double threshold,
                                          std::string_view position);

enum class MapFormat { csv, svg };

struct SvgThresholds {
  std::optional<double> transient;
  std::optional<double> quasistatic;
};

/// CSV: `position,<v1>,...` header, then one row per position; numbers use 6
/// significant digits.
std::string export_map_csv(const CCFMGrid& grid);

/// Heatmap with one rect per cell, a white-to-navy linear color scale and
/// threshold iso-lines.
std::string export_map_svg(const CCFMGrid& grid, const SvgThresholds& thresholds = {});

std::string export_map(const CCFMGrid& grid, MapFormat format,
                       const SvgThresholds& thresholds = {});

/// Reads the CSV export format (e.g. lab measurements) as a measured_import map.
CCFMGrid parse_map_csv(std::string_view text, std::string robot = {}, std::string body_part = {});

}  // namespace pfl
