#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfl {

/// Biomechanical limits and impact parameters of one human body region.
/// All values strictly positive and in SI units (stiffness in N/m).
struct BodyPartParams {
  std::string name;
  double effective_mass = 0.0;           // [kg]
  double stiffness = 0.0;                // [N/m]
  double transient_force_limit = 0.0;    // [N]
  double quasistatic_force_limit = 0.0;  // [N]
  double damping = 0.0;                  // [N s/m], only used by the impact simulator

  /// Throws ValidationError (field path prefixed by `path`) on violation.
  void validate(const std::string& path = "body_part") const;
};

/// Ratio between the quasi-static and transient force limit used when a data
/// file gives only the transient value.
inline constexpr double kDefaultQuasistaticRatio = 0.5;

/// Mass of the human body part in the two-body impact model: either the tabulated
/// value or an immovable (clamped) part.
class HumanMass {
 public:
  static HumanMass finite(double kg);
  static HumanMass infinite() { return HumanMass(); }

  bool is_infinite() const { return !kg_.has_value(); }
  /// Requires !is_infinite().
  double kg() const { return *kg_; }

 private:
  HumanMass() = default;
  std::optional<double> kg_;
};

/// Simplified robot mass: half the moving mass plus the load.
double iso_robot_mass(double moving_mass, double load_mass);

/// Reduced mass of robot and human, (1/m_r + 1/m_h)^-1; m_r for an infinite human.
double effective_mass(double robot_mass, HumanMass human_mass);

/// Peak force of an undamped linear-spring impact, v sqrt(mu k).
double contact_force(double relative_velocity, double mu, double stiffness);

/// Velocity at which contact_force() reaches `force_limit`.
double velocity_limit(double force_limit, double mu, double stiffness);

enum class ForceDeviation { correct, over_10, over_100, under_10, under_100 };

std::string_view to_string(ForceDeviation deviation);

/// Bands a measured force against an expected one. "over" means the expectation
/// overestimates the measurement; "under" means it underestimates it.
/// |measured - expected| <= 10 N is correct; (10, 100] N and beyond 100 N are
/// the _10 and _100 bands.
ForceDeviation classify_force_deviation(double measured, double expected);

/// Table of body parts addressable by name.
class BodyPartTable {
 public:
  BodyPartTable() = default;
  explicit BodyPartTable(std::vector<BodyPartParams> parts);

  const std::vector<BodyPartParams>& parts() const { return parts_; }
  const BodyPartParams* find(std::string_view name) const;
  /// Throws std::out_of_range for unknown names.
  const BodyPartParams& lookup(std::string_view name) const;

  /// Adds or replaces by name.
  void upsert(BodyPartParams part);

 private:
  std::vector<BodyPartParams> parts_;
};

/// Hand and back parameters: hand 0.6 kg, 75 N/mm, 280 N; back 40 kg, 35 N/mm,
/// 420 N. Quasi-static limits are the transient limits scaled by
/// `quasistatic_ratio`.
std::vector<BodyPartParams> builtin_body_parts(double quasistatic_ratio = kDefaultQuasistaticRatio);

/// Parses a body-part data file: a JSON array of objects with keys `name`,
/// `effective_mass_kg`, `stiffness_n_per_mm`, `transient_force_limit_n` and the
/// optional `quasistatic_force_limit_n` and `damping_ns_per_m`.
std::vector<BodyPartParams> parse_body_parts(std::string_view text,
                                             double quasistatic_ratio = kDefaultQuasistaticRatio);

/// Built-in parts overlaid with the parts from `path` when given.
BodyPartTable load_body_part_table(const std::optional<std::string>& path);

}  // namespace pfl
