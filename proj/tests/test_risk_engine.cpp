#include "pfl/errors.hpp"
#include "pfl/risk_engine.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <random>

using namespace pfl;

namespace {

const BodyPartTable& parts() {
  static const BodyPartTable table(builtin_body_parts());
  return table;
}

ContactScenario hand_scenario(double velocity) {
  ContactScenario s;
  s.event_type = EventType::constrained;
  s.force_phase = ForcePhase::phase_I_dynamic;
  s.geometry = Geometry::blunt;
  s.body_part = "hand";
  s.velocity = velocity;
  s.position_label = "C";
  return s;
}

template <class E>
E pick(std::mt19937_64& rng, std::initializer_list<E> values) {
  std::uniform_int_distribution<std::size_t> d(0, values.size() - 1);
  return *(values.begin() + d(rng));
}

}  // namespace

TEST_CASE("interpretation catalog") {
  const auto& catalog = interpretation_catalog();
  REQUIRE(catalog.size() == 5);
  const InterpretationId order[] = {InterpretationId::A, InterpretationId::B1, InterpretationId::B2,
                                    InterpretationId::C, InterpretationId::D};
  for (std::size_t i = 0; i < 5; ++i) CHECK(catalog[i].id == order[i]);

  const auto& a = interpretation(InterpretationId::A);
  CHECK(a.mass_spec->robot_mass_mode == RobotMassMode::iso_simplified);
  CHECK(a.mass_spec->human_mass_mode == HumanMassMode::ts_value);
  const auto& b1 = interpretation(InterpretationId::B1);
  CHECK(b1.mass_spec->robot_mass_mode == RobotMassMode::iso_simplified);
  CHECK(b1.mass_spec->human_mass_mode == HumanMassMode::infinite);
  const auto& b2 = interpretation(InterpretationId::B2);
  CHECK(b2.mass_spec->robot_mass_mode == RobotMassMode::reflected);
  CHECK(b2.mass_spec->human_mass_mode == HumanMassMode::infinite);
  for (const auto& i : catalog) {
    const bool experimental = i.id == InterpretationId::C || i.id == InterpretationId::D;
    CHECK(i.mass_spec.has_value() != experimental);
    CHECK((i.estimation == Estimation::experimental) == experimental);
    CHECK((i.threshold_kind == ThresholdKind::quasistatic) == (i.id == InterpretationId::C));
  }
}

TEST_CASE("scenario classification covers the four cells") {
  auto cell = [](EventType e, ForcePhase p) { return classify_scenario(e, p); };
  const auto up1 = cell(EventType::unconstrained, ForcePhase::phase_I_dynamic);
  CHECK(up1.ts_labels == std::set<TsLabel>{TsLabel::transient});
  CHECK(up1.consistency == Consistency::consistent);
  const auto cp2 = cell(EventType::constrained, ForcePhase::phase_II_quasistatic);
  CHECK(cp2.ts_labels == std::set<TsLabel>{TsLabel::quasistatic});
  CHECK(cp2.consistency == Consistency::consistent);

  int conflicting = 0;
  for (auto e : {EventType::constrained, EventType::unconstrained}) {
    for (auto p : {ForcePhase::phase_I_dynamic, ForcePhase::phase_II_quasistatic}) {
      const auto c = cell(e, p);
      CHECK(c.consistency == cell(e, p).consistency);
      if (c.consistency == Consistency::conflicting) {
        ++conflicting;
        CHECK(c.ts_labels.count(TsLabel::conflicting) == 1);
        CHECK(c.ts_labels.count(TsLabel::transient) == 1);
        CHECK(c.ts_labels.count(TsLabel::quasistatic) == 1);
      }
    }
  }
  CHECK(conflicting == 2);
  CHECK(cell(EventType::constrained, ForcePhase::phase_I_dynamic).consistency ==
        Consistency::conflicting);
}

TEST_CASE("B1 on the UR10e-like robot at 0.28 m/s is safe for the hand") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  const auto report =
      assess(&robot, hand_scenario(0.28), interpretation(InterpretationId::B1), parts());
  REQUIRE(report.predicted_force.has_value());
  CHECK(*report.robot_mass == doctest::Approx(10.87).epsilon(1e-3));
  CHECK(*report.predicted_force == doctest::Approx(252.8).epsilon(5e-4));
  CHECK(report.threshold_applied == 280.0);
  CHECK(report.verdict == Verdict::safe);
  CHECK(report.decision_path.front() == "event_type=constrained");
  CHECK(report.decision_path.back() == "verdict=safe");
}

TEST_CASE("exceeding the threshold recommends the velocity limit") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  const auto report =
      assess(&robot, hand_scenario(0.5), interpretation(InterpretationId::B1), parts());
  CHECK(report.verdict == Verdict::risk_reduction_required);
  // 280 N over sqrt(m_r k) with m_r = half the moving mass.
  const double m_r = 0.5 * total_moving_mass(robot);
  CHECK(*report.velocity_limit == doctest::Approx(280.0 / std::sqrt(m_r * 75000.0)));
  CHECK(report.recommended_action.rfind("reduce velocity to <= 0.31", 0) == 0);
}

TEST_CASE("interpretation A uses the human mass and the transient limit") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  const auto report =
      assess(&robot, hand_scenario(1.0), interpretation(InterpretationId::A), parts());
  CHECK(*report.mu == doctest::Approx(0.5686).epsilon(2e-4));
  CHECK(*report.predicted_force == doctest::Approx(206.5).epsilon(5e-4));
  CHECK(report.verdict == Verdict::safe);
}

TEST_CASE("experimental interpretations defer to measurement") {
  const auto c = assess(nullptr, hand_scenario(0.3), interpretation(InterpretationId::C), parts());
  CHECK(c.verdict == Verdict::experimental_validation_required);
  CHECK(c.threshold_kind == ThresholdKind::quasistatic);
  CHECK(c.threshold_applied == 140.0);
  CHECK_FALSE(c.predicted_force.has_value());

  ContactScenario no_velocity = hand_scenario(0.0);
  no_velocity.velocity.reset();
  const auto d = assess(nullptr, no_velocity, interpretation(InterpretationId::D), parts());
  CHECK(d.verdict == Verdict::experimental_validation_required);
  CHECK(d.threshold_applied == 280.0);
}

TEST_CASE("sharp geometry always requires risk reduction") {
  ContactScenario s = hand_scenario(0.01);
  s.geometry = Geometry::sharp;
  s.injury_measure = InjuryMeasure::energy_density;
  const auto report = assess(nullptr, s, interpretation(InterpretationId::B1), parts());
  CHECK(report.verdict == Verdict::risk_reduction_required);
  CHECK(report.decision_path.back() == "verdict=risk_reduction_required");
}

TEST_CASE("unsupported injury measures are rejected") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  for (auto m : {InjuryMeasure::energy_density, InjuryMeasure::compression_criterion,
                 InjuryMeasure::ao_classification}) {
    ContactScenario s = hand_scenario(0.2);
    s.injury_measure = m;
    CHECK_THROWS_AS(assess(&robot, s, interpretation(InterpretationId::B1), parts()),
                    UnsupportedError);
  }
}

TEST_CASE("missing inputs") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  ContactScenario s = hand_scenario(0.2);
  s.velocity.reset();
  CHECK_THROWS_AS(assess(&robot, s, interpretation(InterpretationId::A), parts()),
                  std::invalid_argument);
  CHECK_THROWS_AS(assess(&robot, hand_scenario(0.2), interpretation(InterpretationId::B2), parts()),
                  std::invalid_argument);
  CHECK_THROWS_AS(assess(nullptr, hand_scenario(0.2), interpretation(InterpretationId::B1), parts()),
                  std::invalid_argument);
  ContactScenario unknown = hand_scenario(0.2);
  unknown.body_part = "knee";
  CHECK_THROWS(assess(&robot, unknown, interpretation(InterpretationId::B1), parts()));
}

TEST_CASE("B2 uses the reflected mass at the contact") {
  const RobotModel robot = test::load_fixture("planar2.json");
  ContactScenario s = hand_scenario(0.3);
  const JointConfiguration q{0.3, 1.1};
  const Eigen::Vector3d tip = forward_kinematics(robot, q)[2].translation();
  s.joint_configuration = q;
  s.contact.emplace(tip, Eigen::Vector3d(0, 1, 0), "tip");
  const auto report = assess(&robot, s, interpretation(InterpretationId::B2), parts());
  const double m_u = reflected_mass(robot, q, *s.contact).kg();
  CHECK(*report.robot_mass == doctest::Approx(m_u).epsilon(1e-14));
  CHECK(*report.predicted_force == doctest::Approx(0.3 * std::sqrt(m_u * 75000.0)));
}

TEST_CASE("near-singular clamping requires risk reduction") {
  ContactScenario s = hand_scenario(0.1);
  s.force_phase = ForcePhase::phase_II_quasistatic;
  s.configuration = ConfigurationClass::near_singular;
  const auto report = assess(nullptr, s, interpretation(InterpretationId::C), parts());
  CHECK(report.verdict == Verdict::risk_reduction_required);
  CHECK(report.decision_path[2] == "configuration=near_singular");

  // Automatic check: a fully stretched planar arm pushed along its own axis.
  const RobotModel robot = test::load_fixture("planar2.json");
  const JointConfiguration straight{0.0, 0.0};
  const Eigen::Vector3d tip = forward_kinematics(robot, straight)[2].translation();
  s.configuration = ConfigurationClass::auto_from_dynamics;
  s.joint_configuration = straight;
  s.contact.emplace(tip, Eigen::Vector3d(1, 0, 0), "tip");
  CHECK(assess(&robot, s, interpretation(InterpretationId::C), parts()).verdict ==
        Verdict::risk_reduction_required);
  s.contact.emplace(tip, Eigen::Vector3d(0, 1, 0), "tip");
  CHECK(assess(&robot, s, interpretation(InterpretationId::C), parts()).verdict ==
        Verdict::experimental_validation_required);
}

TEST_CASE("assessment properties over random scenarios") {
  const RobotModel robot = test::load_fixture("tm5.json");
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> vel(0.0, 2.0);
  const BodyPartTable& table = parts();
  for (int i = 0; i < 500; ++i) {
    ContactScenario s;
    s.event_type = pick(rng, {EventType::constrained, EventType::unconstrained});
    s.force_phase = pick(rng, {ForcePhase::phase_I_dynamic, ForcePhase::phase_II_quasistatic});
    s.geometry = pick(rng, {Geometry::blunt, Geometry::sharp});
    s.configuration = pick(rng, {ConfigurationClass::non_singular, ConfigurationClass::near_singular});
    s.body_part = pick(rng, {std::string("hand"), std::string("back")});
    s.velocity = vel(rng);
    const auto id = pick(rng, {InterpretationId::A, InterpretationId::B1, InterpretationId::C,
                               InterpretationId::D});
    const auto report = assess(&robot, s, interpretation(id), table);

    CHECK(report.decision_path.front().rfind("event_type=", 0) == 0);
    CHECK(report.decision_path.back() == "verdict=" + std::string(to_string(report.verdict)));
    if (s.geometry == Geometry::sharp) CHECK(report.verdict == Verdict::risk_reduction_required);
    if (s.geometry == Geometry::blunt && !(s.event_type == EventType::constrained &&
                                           s.force_phase == ForcePhase::phase_II_quasistatic &&
                                           s.configuration == ConfigurationClass::near_singular)) {
      const bool model = interpretation(id).estimation == Estimation::model;
      CHECK(report.predicted_force.has_value() == model);
      if (model) {
        const BodyPartParams& part = table.lookup(s.body_part);
        const double limit = velocity_limit(part.transient_force_limit, *report.mu, part.stiffness);
        // Tolerate the round-off band right at the limit.
        if (std::abs(*s.velocity - limit) > 1e-9) {
          CHECK((report.verdict == Verdict::safe) == (*s.velocity <= limit));
        }
      }
    }
  }
}

TEST_CASE("scenario documents") {
  const ScenarioFile file = parse_scenario(R"({
    "event_type": "constrained", "force_phase": "phase_I_dynamic", "geometry": "blunt",
    "body_part": "hand", "velocity_m_s": 0.28, "position_label": "C",
    "interpretation": "B2", "robot": "robot.json", "joint_configuration": [0.1, 0.2],
    "contact": {"point_m": [1, 0, 0], "direction": [0, 2, 0], "link": "tip"}
  })");
  CHECK(file.interpretation == InterpretationId::B2);
  CHECK(*file.robot_path == "robot.json");
  CHECK(*file.scenario.velocity == 0.28);
  CHECK(file.scenario.joint_configuration->q.size() == 2);
  CHECK(file.scenario.contact->direction().isApprox(Eigen::Vector3d(0, 1, 0)));

  CHECK_THROWS_AS(parse_scenario(R"({"body_part": "hand", "geometry": "round"})"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"body_part": "hand", "colour": 1})"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"geometry": "blunt"})"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"body_part": )"), ParseError);
}

TEST_CASE("JSON report") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  const auto report =
      assess(&robot, hand_scenario(0.28), interpretation(InterpretationId::B1), parts());
  const auto doc = nlohmann::json::parse(report_to_json(report));
  CHECK(doc["verdict"] == "safe");
  const bool interp_ok = doc["interpretation"].is_object() || doc["interpretation"].is_string();
  CHECK(interp_ok);
  CHECK(doc["decision_path"].size() == report.decision_path.size());

  const auto c = assess(nullptr, hand_scenario(0.28), interpretation(InterpretationId::C), parts());
  CHECK(nlohmann::json::parse(report_to_json(c))["predicted_force_N"] == "requires experiment");
  CHECK(report_to_text(c).find("experimental_validation_required") != std::string::npos);
}
