#pragma once

#include "pfl/contact_model.hpp"
#include "pfl/dynamics.hpp"
#include "pfl/robot_model.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pfl {

// Contact taxonomy.

/// Whether the body part can recoil (unconstrained) or is clamped (constrained).
enum class EventType { constrained, unconstrained };
/// Phase I: short dynamic impact peak. Phase II: sustained quasi-static force.
enum class ForcePhase { phase_I_dynamic, phase_II_quasistatic };
enum class Geometry { blunt, sharp };
enum class ConfigurationClass { non_singular, near_singular, auto_from_dynamics };
/// Force/pressure is the only measure with thresholds; the others are listed so
/// that a request for them can be rejected explicitly.
enum class InjuryMeasure { force_pressure, energy_density, compression_criterion, ao_classification };

/// The overloaded labels used by the standard for contact situations.
enum class TsLabel { transient, quasistatic, conflicting };
enum class Consistency { consistent, conflicting };

enum class InterpretationId { A, B1, B2, C, D };
enum class RobotMassMode { iso_simplified, reflected };
enum class HumanMassMode { ts_value, infinite };
enum class Estimation { model, experimental };
enum class ThresholdKind { transient, quasistatic };

enum class Verdict { safe, risk_reduction_required, experimental_validation_required };

std::string_view to_string(EventType v);
std::string_view to_string(ForcePhase v);
std::string_view to_string(Geometry v);
std::string_view to_string(ConfigurationClass v);
std::string_view to_string(InjuryMeasure v);
std::string_view to_string(TsLabel v);
std::string_view to_string(Consistency v);
std::string_view to_string(InterpretationId v);
std::string_view to_string(RobotMassMode v);
std::string_view to_string(HumanMassMode v);
std::string_view to_string(Estimation v);
std::string_view to_string(ThresholdKind v);
std::string_view to_string(Verdict v);

// Parsers for the textual forms above; throw std::invalid_argument.
EventType parse_event_type(std::string_view text);
ForcePhase parse_force_phase(std::string_view text);
Geometry parse_geometry(std::string_view text);
ConfigurationClass parse_configuration_class(std::string_view text);
InjuryMeasure parse_injury_measure(std::string_view text);
InterpretationId parse_interpretation_id(std::string_view text);

struct EffectiveMassSpec {
  RobotMassMode robot_mass_mode;
  HumanMassMode human_mass_mode;
};

/// One way of reading the standard for a constrained, dynamic contact.
struct Interpretation {
  InterpretationId id;
  std::optional<EffectiveMassSpec> mass_spec;  // empty for the experimental rows
  Estimation estimation;
  ThresholdKind threshold_kind;
};

/// The five interpretations A, B1, B2, C, D in that order.
const std::vector<Interpretation>& interpretation_catalog();
const Interpretation& interpretation(InterpretationId id);

struct ScenarioClassification {
  std::set<TsLabel> ts_labels;
  Consistency consistency;
};

/// Maps the physical description (event type, force phase) onto the labels of
/// the standard. Mixed cells get both labels and are flagged as conflicting.
ScenarioClassification classify_scenario(EventType event_type, ForcePhase force_phase);

struct ContactScenario {
  EventType event_type = EventType::constrained;
  ForcePhase force_phase = ForcePhase::phase_I_dynamic;
  Geometry geometry = Geometry::blunt;
  ConfigurationClass configuration = ConfigurationClass::non_singular;
  InjuryMeasure injury_measure = InjuryMeasure::force_pressure;
  std::string body_part;
  std::optional<ContactFrame> contact;
  std::optional<JointConfiguration> joint_configuration;
  std::optional<double> velocity;  // [m/s]
  std::string position_label;

  void validate() const;
};

struct AssessmentReport {
  ContactScenario scenario;
  Interpretation interpretation;
  std::set<TsLabel> ts_labels;
  Consistency consistency = Consistency::consistent;
  std::vector<std::string> decision_path;
  /// Present iff the interpretation is model based. +inf for a direction in
  /// which the reflected mass is unbounded.
  std::optional<double> predicted_force;
  std::optional<double> robot_mass;      // [kg]
  std::optional<double> mu;              // [kg]
  std::optional<double> velocity_limit;  // [m/s]
  ThresholdKind threshold_kind = ThresholdKind::transient;
  double threshold_applied = 0.0;  // [N]
  Verdict verdict = Verdict::safe;
  std::string recommended_action;
};

/// Walks the assessment decision tree for one scenario.
///
/// Order: event type, force phase, configuration check (constrained phase II
/// only), geometry, injury measure, estimation, threshold comparison. A
/// near-singular clamp or a sharp geometry ends the walk with
/// risk_reduction_required; experimental interpretations end with
/// experimental_validation_required.
///
/// `model` may be null unless the interpretation or the configuration check needs
/// it. Throws UnsupportedError for injury measures other than force/pressure,
/// std::invalid_argument for missing scenario data and ModelError for
/// inconsistent dynamics input.
AssessmentReport assess(const RobotModel* model, const ContactScenario& scenario,
                        const Interpretation& interp, const BodyPartTable& parts);

/// Scenario document with its references resolved to values.
struct ScenarioFile {
  ContactScenario scenario;
  std::optional<std::string> robot_path;
  InterpretationId interpretation = InterpretationId::B1;
};

/// Parses a scenario JSON document.
ScenarioFile parse_scenario(std::string_view text);

/// Machine-readable report.
std::string report_to_json(const AssessmentReport& report);
/// Human-readable report.
std::string report_to_text(const AssessmentReport& report);

}  // namespace pfl
