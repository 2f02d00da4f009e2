#include "pfl/ccfm.hpp"
#include "pfl/dynamics.hpp"
#include "pfl/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <regex>

using namespace pfl;

namespace {

const BodyPartParams& hand() {
  static const BodyPartTable table(builtin_body_parts());
  return table.lookup("hand");
}

MapRequest b1_request(std::vector<std::string> positions, std::vector<double> velocities) {
  MapRequest r;
  r.source = MapSource::model_B1;
  r.positions = std::move(positions);
  r.velocities = std::move(velocities);
  return r;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("velocity grids") {
  const auto grid = velocity_grid(0.1, 1.0, 0.1);
  REQUIRE(grid.size() == 10);
  CHECK(grid.front() == 0.1);
  CHECK(grid.back() == 1.0);
  const auto def = default_velocity_grid();
  CHECK(def.size() == 30);
  CHECK(def.front() == 0.05);
  CHECK(def.back() == 1.5);
  CHECK_THROWS_AS(velocity_grid(1.0, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(velocity_grid(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("B1 map on the UR10e-like robot") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  const CCFMGrid grid = generate_map(robot, hand(), b1_request({"C"}, velocity_grid(0.1, 1.0, 0.1)));
  REQUIRE(grid.forces.rows() == 1);
  REQUIRE(grid.forces.cols() == 10);
  const double m_r = 0.5 * total_moving_mass(robot);
  for (int j = 0; j < 10; ++j) {
    CHECK(grid.forces(0, j) == doctest::Approx(grid.velocities[j] * std::sqrt(m_r * 75000.0)));
  }
  CHECK(grid.forces(0, 0) == doctest::Approx(90.3).epsilon(1e-3));

  CHECK(*lookup_max_velocity(grid, 280.0, "C") == doctest::Approx(0.3));
  CHECK_FALSE(lookup_max_velocity(grid, 10.0, "C").has_value());
  CHECK(*lookup_max_velocity(grid, 1e4, "C") == doctest::Approx(1.0));
  CHECK_THROWS_AS(lookup_max_velocity(grid, 280.0, "Z"), std::invalid_argument);
}

TEST_CASE("zero velocity column") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  const CCFMGrid grid = generate_map(robot, hand(), b1_request({"C"}, {0.0}));
  CHECK(grid.forces(0, 0) == 0.0);
  CHECK(count(export_map_csv(grid), "\n") == 2);
}

TEST_CASE("model rows are increasing and lookups respect the threshold") {
  const RobotModel robot = test::load_fixture("tm5.json");
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> threshold(20.0, 600.0);
  for (MapSource source : {MapSource::model_A, MapSource::model_B1}) {
    MapRequest r = b1_request({"C", "N"}, default_velocity_grid());
    r.source = source;
    const CCFMGrid grid = generate_map(robot, hand(), r);
    for (Eigen::Index i = 0; i < grid.forces.rows(); ++i) {
      for (Eigen::Index j = 1; j < grid.forces.cols(); ++j) {
        CHECK(grid.forces(i, j) > grid.forces(i, j - 1));
      }
    }
    for (int trial = 0; trial < 50; ++trial) {
      const double F = threshold(rng);
      const auto v = lookup_max_velocity(grid, F, "N");
      if (!v) {
        CHECK(grid.forces(1, 0) > F);
        continue;
      }
      const auto j = static_cast<Eigen::Index>(
          std::find(grid.velocities.begin(), grid.velocities.end(), *v) - grid.velocities.begin());
      CHECK(grid.forces(1, j) <= F);
      if (j + 1 < grid.forces.cols()) CHECK(grid.forces(1, j + 1) > F);
    }
  }
}

TEST_CASE("simulated map agrees with the closed form") {
  const RobotModel robot = test::load_fixture("ur10e.json");
  MapRequest r = b1_request({"C"}, velocity_grid(0.1, 1.0, 0.3));
  const CCFMGrid model = generate_map(robot, hand(), r);
  r.source = MapSource::simulated;
  const CCFMGrid sim = generate_map(robot, hand(), r);
  CHECK(sim.source == MapSource::simulated);
  for (Eigen::Index j = 0; j < model.forces.cols(); ++j) {
    CHECK(std::abs(sim.forces(0, j) - model.forces(0, j)) <= 0.01 * model.forces(0, j));
  }
}

TEST_CASE("B2 map needs configurations and evaluates the reflected mass") {
  const RobotModel robot = test::load_fixture("planar2.json");
  MapRequest r = b1_request({"C", "N"}, {0.2, 0.4});
  r.source = MapSource::model_B2;
  r.direction = Eigen::Vector3d(0, 1, 0);
  CHECK_THROWS_AS(generate_map(robot, hand(), r), std::invalid_argument);

  r.configurations = {{"C", JointConfiguration{0.3, 1.1}}, {"N", JointConfiguration{0.9, 0.4}}};
  const CCFMGrid grid = generate_map(robot, hand(), r);
  const JointConfiguration& qc = r.configurations.at("C");
  const Eigen::Vector3d tip = forward_kinematics(robot, qc)[robot.flange_index()].translation();
  const double m_u = reflected_mass(robot, qc, ContactFrame(tip, r.direction, "tip")).kg();
  CHECK(grid.forces(0, 1) == doctest::Approx(0.4 * std::sqrt(m_u * 75000.0)));

  SUBCASE("permuting positions permutes rows") {
    MapRequest swapped = r;
    swapped.positions = {"N", "C"};
    const CCFMGrid other = generate_map(robot, hand(), swapped);
    CHECK(other.positions[0].label == "N");
    CHECK(other.forces.row(0) == grid.forces.row(1));
    CHECK(other.forces.row(1) == grid.forces.row(0));
  }
  SUBCASE("unknown position") {
    r.positions = {"C", "Q"};
    CHECK_THROWS_AS(generate_map(robot, hand(), r), std::invalid_argument);
  }
}

TEST_CASE("CSV export round trip is byte-identical") {
  const RobotModel robot = test::load_fixture("tm5.json");
  const CCFMGrid grid = generate_map(robot, hand(), b1_request({"C", "N"}, default_velocity_grid()));
  const std::string csv = export_map_csv(grid);
  CHECK(csv.rfind("position,0.05,0.1,", 0) == 0);
  const CCFMGrid parsed = parse_map_csv(csv, "tm5", "hand");
  CHECK(parsed.source == MapSource::measured_import);
  CHECK(export_map_csv(parsed) == csv);
  CHECK(export_map(parsed, MapFormat::csv) == csv);

  CHECK_THROWS_AS(parse_map_csv("position,0.1,0.2\nC,1\n"), ParseError);
  CHECK_THROWS_AS(parse_map_csv("position,0.2,0.1\nC,1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_csv(""), ParseError);
}

TEST_CASE("SVG has one rect per cell and threshold lines") {
  const RobotModel robot = test::load_fixture("tm5.json");
  const CCFMGrid grid = generate_map(robot, hand(), b1_request({"C", "N"}, default_velocity_grid()));
  const std::string svg = export_map_svg(grid, {280.0, 140.0});
  CHECK(svg.rfind("<?xml", 0) == 0);
  const std::regex rect("<rect[^>]*class=\"cell\"");
  const auto rects = std::distance(std::sregex_iterator(svg.begin(), svg.end(), rect),
                                   std::sregex_iterator());
  CHECK(rects == 2 * 30);
  CHECK(count(svg, "<rect") == 2 * 30);
  CHECK(count(svg, "#d62728") >= 1);
  CHECK(count(svg, "#ff7f0e") >= 1);
  CHECK(export_map_svg(grid, {280.0, 140.0}) == svg);
}
