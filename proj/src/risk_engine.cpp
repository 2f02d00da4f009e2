#include "pfl/risk_engine.hpp"

#include "json_util.hpp"
#include "pfl/errors.hpp"
#include "pfl/format.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace pfl {

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum value_of(const NameTable<Enum, N>& table, std::string_view text, const char* what) {
  for (const auto& [e, name] : table) {
    if (name == text) return e;
  }
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

constexpr NameTable<EventType, 2> kEventTypes{{{EventType::constrained, "constrained"},
                                               {EventType::unconstrained, "unconstrained"}}};
constexpr NameTable<ForcePhase, 2> kForcePhases{
    {{ForcePhase::phase_I_dynamic, "phase_I_dynamic"},
     {ForcePhase::phase_II_quasistatic, "phase_II_quasistatic"}}};
constexpr NameTable<Geometry, 2> kGeometries{{{Geometry::blunt, "blunt"}, {Geometry::sharp, "sharp"}}};
constexpr NameTable<ConfigurationClass, 3> kConfigurations{
    {{ConfigurationClass::non_singular, "non_singular"},
     {ConfigurationClass::near_singular, "near_singular"},
     {ConfigurationClass::auto_from_dynamics, "auto_from_dynamics"}}};
constexpr NameTable<InjuryMeasure, 4> kInjuryMeasures{
    {{InjuryMeasure::force_pressure, "force_pressure"},
     {InjuryMeasure::energy_density, "energy_density"},
     {InjuryMeasure::compression_criterion, "compression_criterion"},
     {InjuryMeasure::ao_classification, "ao_classification"}}};
constexpr NameTable<TsLabel, 3> kTsLabels{{{TsLabel::transient, "transient"},
                                           {TsLabel::quasistatic, "quasistatic"},
                                           {TsLabel::conflicting, "conflicting"}}};
constexpr NameTable<Consistency, 2> kConsistency{
    {{Consistency::consistent, "consistent"}, {Consistency::conflicting, "conflicting"}}};
constexpr NameTable<InterpretationId, 5> kInterpretations{{{InterpretationId::A, "A"},
                                                           {InterpretationId::B1, "B1"},
                                                           {InterpretationId::B2, "B2"},
                                                           {InterpretationId::C, "C"},
                                                           {InterpretationId::D, "D"}}};
constexpr NameTable<RobotMassMode, 2> kRobotMassModes{
    {{RobotMassMode::iso_simplified, "iso_simplified"}, {RobotMassMode::reflected, "reflected"}}};
constexpr NameTable<HumanMassMode, 2> kHumanMassModes{
    {{HumanMassMode::ts_value, "ts_value"}, {HumanMassMode::infinite, "infinite"}}};
constexpr NameTable<Estimation, 2> kEstimations{
    {{Estimation::model, "model"}, {Estimation::experimental, "experimental"}}};
constexpr NameTable<ThresholdKind, 2> kThresholdKinds{
    {{ThresholdKind::transient, "transient"}, {ThresholdKind::quasistatic, "quasistatic"}}};
constexpr NameTable<Verdict, 3> kVerdicts{
    {{Verdict::safe, "safe"},
     {Verdict::risk_reduction_required, "risk_reduction_required"},
     {Verdict::experimental_validation_required, "experimental_validation_required"}}};

std::string node(std::string_view name, std::string_view branch) {
  return std::string(name) + "=" + std::string(branch);
}

double threshold_for(const BodyPartParams& part, ThresholdKind kind) {
  return kind == ThresholdKind::transient ? part.transient_force_limit
                                          : part.quasistatic_force_limit;
}

void finish(AssessmentReport& report, Verdict verdict, std::string action) {
  report.verdict = verdict;
  report.recommended_action = std::move(action);
  report.decision_path.push_back(node("verdict", to_string(verdict)));
}

const JointConfiguration& require_configuration(const ContactScenario& s) {
  if (!s.joint_configuration) {
    throw std::invalid_argument("scenario has no joint configuration");
  }
  return *s.joint_configuration;
}

const ContactFrame& require_contact(const ContactScenario& s) {
  if (!s.contact) {
    throw std::invalid_argument("scenario has no contact frame");
  }
  return *s.contact;
}

const RobotModel& require_model(const RobotModel* model, const char* why) {
  if (model == nullptr) {
    throw std::invalid_argument(std::string("a robot model is required for ") + why);
  }
  return *model;
}

}  // namespace

std::string_view to_string(EventType v) { return name_of(kEventTypes, v); }
std::string_view to_string(ForcePhase v) { return name_of(kForcePhases, v); }
std::string_view to_string(Geometry v) { return name_of(kGeometries, v); }
std::string_view to_string(ConfigurationClass v) { return name_of(kConfigurations, v); }
std::string_view to_string(InjuryMeasure v) { return name_of(kInjuryMeasures, v); }
std::string_view to_string(TsLabel v) { return name_of(kTsLabels, v); }
std::string_view to_string(Consistency v) { return name_of(kConsistency, v); }
std::string_view to_string(InterpretationId v) { return name_of(kInterpretations, v); }
std::string_view to_string(RobotMassMode v) { return name_of(kRobotMassModes, v); }
std::string_view to_string(HumanMassMode v) { return name_of(kHumanMassModes, v); }
std::string_view to_string(Estimation v) { return name_of(kEstimations, v); }
std::string_view to_string(ThresholdKind v) { return name_of(kThresholdKinds, v); }
std::string_view to_string(Verdict v) { return name_of(kVerdicts, v); }

EventType parse_event_type(std::string_view t) { return value_of(kEventTypes, t, "event type"); }
ForcePhase parse_force_phase(std::string_view t) { return value_of(kForcePhases, t, "force phase"); }
Geometry parse_geometry(std::string_view t) { return value_of(kGeometries, t, "geometry"); }
ConfigurationClass parse_configuration_class(std::string_view t) {
  return value_of(kConfigurations, t, "configuration");
}
InjuryMeasure parse_injury_measure(std::string_view t) {
  return value_of(kInjuryMeasures, t, "injury measure");
}
InterpretationId parse_interpretation_id(std::string_view t) {
  return value_of(kInterpretations, t, "interpretation");
}

const std::vector<Interpretation>& interpretation_catalog() {
  static const std::vector<Interpretation> catalog{
      {InterpretationId::A,
       EffectiveMassSpec{RobotMassMode::iso_simplified, HumanMassMode::ts_value},
       Estimation::model, ThresholdKind::transient},
      {InterpretationId::B1,
       EffectiveMassSpec{RobotMassMode::iso_simplified, HumanMassMode::infinite},
       Estimation::model, ThresholdKind::transient},
      {InterpretationId::B2, EffectiveMassSpec{RobotMassMode::reflected, HumanMassMode::infinite},
       Estimation::model, ThresholdKind::transient},
      {InterpretationId::C, std::nullopt, Estimation::experimental, ThresholdKind::quasistatic},
      {InterpretationId::D, std::nullopt, Estimation::experimental, ThresholdKind::transient},
  };
  return catalog;
}

const Interpretation& interpretation(InterpretationId id) {
  for (const auto& i : interpretation_catalog()) {
    if (i.id == id) return i;
  }
  throw std::invalid_argument("unknown interpretation");
}

ScenarioClassification classify_scenario(EventType event_type, ForcePhase force_phase) {
  const bool constrained = event_type == EventType::constrained;
  const bool quasistatic = force_phase == ForcePhase::phase_II_quasistatic;
  if (!constrained && !quasistatic) return {{TsLabel::transient}, Consistency::consistent};
  if (constrained && quasistatic) return {{TsLabel::quasistatic}, Consistency::consistent};
  return {{TsLabel::transient, TsLabel::quasistatic, TsLabel::conflicting},
          Consistency::conflicting};
}

void ContactScenario::validate() const {
  if (velocity && (!std::isfinite(*velocity) || *velocity < 0.0)) {
    throw ValidationError("velocity_m_s", "must be finite and >= 0");
  }
  if (body_part.empty()) {
    throw ValidationError("body_part", "must not be empty");
  }
  if (configuration == ConfigurationClass::auto_from_dynamics && (!contact || !joint_configuration)) {
    throw ValidationError("configuration",
                          "auto_from_dynamics requires a contact frame and a joint configuration");
  }
}

AssessmentReport assess(const RobotModel* model, const ContactScenario& scenario,
                        const Interpretation& interp, const BodyPartTable& parts) {
  scenario.validate();
  const BodyPartParams& part = parts.lookup(scenario.body_part);

  AssessmentReport report;
  report.scenario = scenario;
  report.interpretation = interp;
  const ScenarioClassification cls = classify_scenario(scenario.event_type, scenario.force_phase);
  report.ts_labels = cls.ts_labels;
  report.consistency = cls.consistency;
  report.threshold_kind = interp.threshold_kind;
  report.threshold_applied = threshold_for(part, interp.threshold_kind);

  auto& path = report.decision_path;
  path.push_back(node("event_type", to_string(scenario.event_type)));
  path.push_back(node("force_phase", to_string(scenario.force_phase)));

  if (scenario.event_type == EventType::constrained &&
      scenario.force_phase == ForcePhase::phase_II_quasistatic) {
    bool near_singular = scenario.configuration == ConfigurationClass::near_singular;
    if (scenario.configuration == ConfigurationClass::auto_from_dynamics) {
      const RobotModel& m = require_model(model, "the automatic configuration check");
      near_singular =
          !reflected_mass(m, require_configuration(scenario), require_contact(scenario)).bounded();
    }
    path.push_back(node("configuration", near_singular ? "near_singular" : "non_singular"));
    if (near_singular) {
      finish(report, Verdict::risk_reduction_required,
             "avoid clamping in a near-singular robot configuration");
      return report;
    }
  }

  path.push_back(node("geometry", to_string(scenario.geometry)));
  if (scenario.geometry == Geometry::sharp) {
    finish(report, Verdict::risk_reduction_required, "eliminate sharp contact geometry");
    return report;
  }

  if (scenario.injury_measure != InjuryMeasure::force_pressure) {
    throw UnsupportedError("injury measure '" + std::string(to_string(scenario.injury_measure)) +
                           "' has no thresholds; only force_pressure is supported");
  }
  path.push_back(node("injury_measure", to_string(scenario.injury_measure)));
  path.push_back(node("estimation", to_string(interp.estimation)));
  path.push_back(node("threshold", to_string(interp.threshold_kind)));

  if (interp.estimation == Estimation::experimental) {
    finish(report, Verdict::experimental_validation_required,
           "measure the peak contact force and compare it with " +
               format_number(report.threshold_applied) + " N");
    return report;
  }

  if (!scenario.velocity) {
    throw std::invalid_argument("model-based interpretation " + std::string(to_string(interp.id)) +
                                " requires the relative velocity");
  }
  const double velocity = *scenario.velocity;
  const EffectiveMassSpec& spec = interp.mass_spec.value();

  double robot_mass = 0.0;
  if (spec.robot_mass_mode == RobotMassMode::iso_simplified) {
    const RobotModel& m = require_model(model, "the simplified robot mass");
    robot_mass = iso_robot_mass(total_moving_mass(m), m.payload_mass() + m.adapter_mass());
  } else {
    const RobotModel& m = require_model(model, "the reflected robot mass");
    const ReflectedMass reflected =
        reflected_mass(m, require_configuration(scenario), require_contact(scenario));
    if (!reflected.bounded()) {
      report.predicted_force = std::numeric_limits<double>::infinity();
      finish(report, Verdict::risk_reduction_required,
             "impact direction is near-singular; change the robot configuration");
      return report;
    }
    robot_mass = reflected.kg();
  }
  const HumanMass human = spec.human_mass_mode == HumanMassMode::infinite
                              ? HumanMass::infinite()
                              : HumanMass::finite(part.effective_mass);
  const double mu = effective_mass(robot_mass, human);
  const double force = contact_force(velocity, mu, part.stiffness);
  const double limit = velocity_limit(report.threshold_applied, mu, part.stiffness);
  report.robot_mass = robot_mass;
  report.mu = mu;
  report.predicted_force = force;
  report.velocity_limit = limit;

  if (force <= report.threshold_applied) {
    finish(report, Verdict::safe, "none");
  } else {
    finish(report, Verdict::risk_reduction_required,
           "reduce velocity to <= " + format_number(limit) + " m/s");
  }
  return report;
}

ScenarioFile parse_scenario(std::string_view text) {
  using detail::json;
  const json root = detail::parse_json(text);
  detail::require_known_keys(root, "",
                             {"event_type", "force_phase", "geometry", "configuration",
                              "injury_measure", "body_part", "contact", "velocity_m_s",
                              "position_label", "robot", "interpretation", "joint_configuration"});
  auto enum_field = [&](const char* key, auto parser, auto fallback) {
    auto it = root.find(key);
    if (it == root.end()) return fallback;
    try {
      return parser(detail::get_string(*it, key));
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const ValidationError*>(&e) != nullptr) throw;
      throw ValidationError(key, e.what());
    }
  };

  ScenarioFile file;
  ContactScenario& s = file.scenario;
  s.event_type = enum_field("event_type", parse_event_type, EventType::constrained);
  s.force_phase = enum_field("force_phase", parse_force_phase, ForcePhase::phase_I_dynamic);
  s.geometry = enum_field("geometry", parse_geometry, Geometry::blunt);
  s.configuration =
      enum_field("configuration", parse_configuration_class, ConfigurationClass::non_singular);
  s.injury_measure =
      enum_field("injury_measure", parse_injury_measure, InjuryMeasure::force_pressure);
  file.interpretation =
      enum_field("interpretation", parse_interpretation_id, InterpretationId::B1);
  s.body_part = detail::get_string(detail::require(root, "", "body_part"), "body_part");
  if (auto it = root.find("velocity_m_s"); it != root.end()) {
    s.velocity = detail::get_number(*it, "velocity_m_s");
  }
  if (auto it = root.find("position_label"); it != root.end()) {
    s.position_label = detail::get_string(*it, "position_label");
  }
  if (auto it = root.find("robot"); it != root.end()) {
    file.robot_path = detail::get_string(*it, "robot");
  }
  if (auto it = root.find("contact"); it != root.end()) {
    detail::require_known_keys(*it, "contact", {"point_m", "direction", "link"});
    s.contact.emplace(
        detail::get_vector3(detail::require(*it, "contact", "point_m"), "contact.point_m"),
        detail::get_vector3(detail::require(*it, "contact", "direction"), "contact.direction"),
        detail::get_string(detail::require(*it, "contact", "link"), "contact.link"));
  }
  if (auto it = root.find("joint_configuration"); it != root.end()) {
    if (!it->is_array()) throw ValidationError("joint_configuration", "expected an array");
    Eigen::VectorXd q(static_cast<Eigen::Index>(it->size()));
    for (std::size_t i = 0; i < it->size(); ++i) {
      q[static_cast<Eigen::Index>(i)] =
          detail::get_number((*it)[i], detail::element("joint_configuration", i));
    }
    s.joint_configuration = JointConfiguration(std::move(q));
  }
  s.validate();
  return file;
}

namespace {

detail::json number_or_null(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "unbounded";
  return round_significant(*v);
}

}  // namespace

std::string report_to_json(const AssessmentReport& r) {
  using detail::json;
  const ContactScenario& s = r.scenario;
  json scenario = {
      {"event_type", to_string(s.event_type)},
      {"force_phase", to_string(s.force_phase)},
      {"geometry", to_string(s.geometry)},
      {"configuration", to_string(s.configuration)},
      {"injury_measure", to_string(s.injury_measure)},
      {"body_part", s.body_part},
      {"velocity_m_s", number_or_null(s.velocity)},
      {"position_label", s.position_label},
  };
  json labels = json::array();
  for (TsLabel l : r.ts_labels) labels.push_back(to_string(l));
  json interp = {{"id", to_string(r.interpretation.id)},
                 {"estimation", to_string(r.interpretation.estimation)},
                 {"threshold_kind", to_string(r.interpretation.threshold_kind)}};
  if (r.interpretation.mass_spec) {
    interp["robot_mass_mode"] = to_string(r.interpretation.mass_spec->robot_mass_mode);
    interp["human_mass_mode"] = to_string(r.interpretation.mass_spec->human_mass_mode);
  }
  json root = {
      {"scenario", scenario},
      {"interpretation", interp},
      {"ts_labels", labels},
      {"consistency", to_string(r.consistency)},
      {"decision_path", r.decision_path},
      {"predicted_force_N", r.predicted_force ? number_or_null(r.predicted_force)
                                              : json("requires experiment")},
      {"robot_mass_kg", number_or_null(r.robot_mass)},
      {"mu_kg", number_or_null(r.mu)},
      {"velocity_limit_m_s", number_or_null(r.velocity_limit)},
      {"threshold_kind", to_string(r.threshold_kind)},
      {"threshold_N", round_significant(r.threshold_applied)},
      {"verdict", to_string(r.verdict)},
      {"recommended_action", r.recommended_action},
  };
  return root.dump(2) + "\n";
}

std::string report_to_text(const AssessmentReport& r) {
  std::ostringstream out;
  out << "interpretation: " << to_string(r.interpretation.id) << "\n";
  out << "ts labels:";
  for (TsLabel l : r.ts_labels) out << " " << to_string(l);
  out << " (" << to_string(r.consistency) << ")\n";
  out << "decision path:";
  for (const auto& n : r.decision_path) out << " " << n;
  out << "\n";
  if (r.robot_mass) out << "robot mass: " << format_number(*r.robot_mass) << " kg\n";
  if (r.mu) out << "effective mass: " << format_number(*r.mu) << " kg\n";
  if (r.predicted_force) {
    out << "predicted force: " << format_number(*r.predicted_force) << " N\n";
  } else {
    out << "predicted force: requires experiment\n";
  }
  out << "threshold (" << to_string(r.threshold_kind)
      << "): " << format_number(r.threshold_applied) << " N\n";
  if (r.velocity_limit) out << "velocity limit: " << format_number(*r.velocity_limit) << " m/s\n";
  out << "verdict: " << to_string(r.verdict) << "\n";
  out << "action: " << r.recommended_action << "\n";
  return out.str();
}

}  // namespace pfl
