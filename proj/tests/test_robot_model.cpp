#include "pfl/errors.hpp"
#include "pfl/robot_model.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

using namespace pfl;

namespace {

const char* kMinimal = R"({
  "name": "one",
  "links": [
    {"name": "arm", "joint_type": "revolute", "joint_axis": [0, 0, 1],
     "origin_xyz_m": [0, 0, 0], "origin_rpy_rad": [0, 0, 0],
     "mass_kg": 2.0, "com_m": [1, 0, 0], "inertia_kgm2": [0, 0, 0, 0, 0, 0]}
  ]
})";

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string field_of_error(const std::string& doc) {
  try {
    parse_robot(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("minimal document parses to a one-DOF model") {
  const RobotModel model = parse_robot(kMinimal);
  CHECK(model.name() == "one");
  CHECK(model.dof() == 1);
  CHECK(model.links().size() == 1);
  CHECK(model.links()[0].com.isApprox(Eigen::Vector3d(1, 0, 0)));
  CHECK(total_moving_mass(model) == doctest::Approx(2.0));
}

TEST_CASE("negative mass is reported with its field path") {
  std::string doc = kMinimal;
  doc.replace(doc.find("2.0"), 3, "-1");
  const std::string field = field_of_error(doc);
  CHECK(field.rfind("links[0].mass", 0) == 0);
}

TEST_CASE("semantic errors name the offending field") {
  std::string axis = kMinimal;
  axis.replace(axis.find("[0, 0, 1]"), 9, "[0, 0, 2]");
  CHECK(field_of_error(axis) == "links[0].joint_axis");

  std::string unknown = kMinimal;
  unknown.replace(unknown.find("\"name\": \"one\""), 13, "\"name\": \"one\", \"color\": 1");
  CHECK(field_of_error(unknown) == "color");

  std::string joint = kMinimal;
  joint.replace(joint.find("revolute"), 8, "helical");
  CHECK(field_of_error(joint) == "links[0].joint_type");

  std::string inertia = kMinimal;
  inertia.replace(inertia.find("[0, 0, 0, 0, 0, 0]"), 18, "[1, 1, 1, 5, 0, 0]");
  CHECK(field_of_error(inertia) == "links[0].inertia_kgm2");

  std::string missing = kMinimal;
  missing.replace(missing.find("\"mass_kg\": 2.0,"), 15, "");
  CHECK(field_of_error(missing) == "links[0].mass_kg");
}

TEST_CASE("duplicate link names are rejected") {
  nlohmann::json doc = nlohmann::json::parse(kMinimal);
  doc["links"].push_back(doc["links"][0]);
  CHECK(field_of_error(doc.dump()) == "links[1].name");
}

TEST_CASE("syntax errors carry line and column") {
  const std::string doc = "{\n  \"name\": \"x\",\n  \"links\": [ oops ]\n}";
  try {
    parse_robot(doc);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 14);
  }
}

TEST_CASE("7-link FE-like fixture: total moving mass is the sum over moving links") {
  const RobotModel model = test::load_fixture("fe_like.json");
  CHECK(model.dof() == 7);
  CHECK(model.payload_mass() == 0.0);

  // Oracle: sum the document's masses for every non-fixed link (the fixture's
  // fixed links sit at the base and at the massless flange).
  const auto doc = nlohmann::json::parse(read(test::fixture("fe_like.json")));
  double expected = 0.0;
  for (const auto& link : doc["links"]) {
    if (link["joint_type"] != "fixed") expected += link["mass_kg"].get<double>();
  }
  CHECK(total_moving_mass(model) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(total_moving_mass(model) == doctest::Approx(16.062132).epsilon(1e-12));
}

TEST_CASE("total_moving_mass excludes links fixed to the base") {
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const RobotModel model("m",
                         {test::make_link("base", JointType::fixed, z, {0, 0, 0}, 5.0, {0, 0, 0}),
                          test::make_link("a", JointType::revolute, z, {0, 0, 0.1}, 3.0, {0.1, 0, 0}),
                          test::make_link("b", JointType::revolute, z, {0.2, 0, 0}, 4.0, {0.1, 0, 0})},
                         0.0, 0.0);
  CHECK(total_moving_mass(model) == doctest::Approx(7.0));
  CHECK(total_moving_mass(test::planar_arm(1, 1, 2, 0)) == doctest::Approx(2.0));
}

TEST_CASE("TM5 fixture is authored with 21.5 kg of moving links and a 0.6 kg adapter") {
  const RobotModel model = test::load_fixture("tm5.json");
  CHECK(total_moving_mass(model) == doctest::Approx(21.5).epsilon(1e-14));
  CHECK(model.adapter_mass() == 0.6);
  CHECK(model.reference_positions().at("C").isApprox(Eigen::Vector3d(0.357, 0, 0)));
  CHECK(model.reference_positions().at("N").isApprox(Eigen::Vector3d(0.557, 0, 0)));
}

TEST_CASE("parse, serialize, parse is stable") {
  for (const char* name : {"one_link.json", "planar2.json", "fe_like.json", "tm5.json", "ur10e.json"}) {
    CAPTURE(name);
    const RobotModel first = test::load_fixture(name);
    const std::string text = serialize_robot(first);
    const RobotModel second = parse_robot(text);
    CHECK(serialize_robot(second) == text);
    REQUIRE(second.links().size() == first.links().size());
    for (std::size_t i = 0; i < first.links().size(); ++i) {
      const auto& a = first.links()[i];
      const auto& b = second.links()[i];
      CHECK(a.name == b.name);
      CHECK(a.joint_type == b.joint_type);
      CHECK(a.mass == b.mass);
      CHECK(a.inertia == b.inertia);
      CHECK(a.origin_translation == b.origin_translation);
      CHECK(a.origin_rotation == b.origin_rotation);
      CHECK(a.com == b.com);
      CHECK(a.joint_axis == b.joint_axis);
    }
    CHECK(second.reference_positions() == first.reference_positions());
  }
}

TEST_CASE("explicit order makes the document order irrelevant") {
  auto doc = nlohmann::json::parse(read(test::fixture("fe_like.json")));
  int order = 0;
  for (auto& link : doc["links"]) link["order"] = order++;
  const RobotModel reference = parse_robot(doc.dump());

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto shuffled = doc;
    std::vector<nlohmann::json> links(shuffled["links"].begin(), shuffled["links"].end());
    std::shuffle(links.begin(), links.end(), rng);
    shuffled["links"] = links;
    const RobotModel model = parse_robot(shuffled.dump());
    CHECK(total_moving_mass(model) == total_moving_mass(reference));
    CHECK(serialize_robot(model) == serialize_robot(reference));
  }

  auto partial = doc;
  partial["links"][0].erase("order");
  CHECK(field_of_error(partial.dump()) == "links");
}

TEST_CASE("configuration dimension is checked") {
  const RobotModel model = test::load_fixture("planar2.json");
  CHECK_NOTHROW(check_configuration(model, JointConfiguration{0.1, 0.2}));
  CHECK_THROWS_AS(check_configuration(model, JointConfiguration{0.1}), ModelError);
}
