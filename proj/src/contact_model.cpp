#include "pfl/contact_model.hpp"

#include "json_util.hpp"
#include "pfl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pfl {

namespace {

constexpr double kNewtonPerMillimetre = 1000.0;
constexpr double kCorrectBand = 10.0;
constexpr double kLargeBand = 100.0;

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void BodyPartParams::validate(const std::string& path) const {
  if (name.empty()) throw ValidationError(path + ".name", "must not be empty");
  if (!positive(effective_mass)) throw ValidationError(path + ".effective_mass_kg", "must be > 0");
  if (!positive(stiffness)) throw ValidationError(path + ".stiffness_n_per_mm", "must be > 0");
  if (!positive(transient_force_limit)) {
    throw ValidationError(path + ".transient_force_limit_n", "must be > 0");
  }
  if (!positive(quasistatic_force_limit)) {
    throw ValidationError(path + ".quasistatic_force_limit_n", "must be > 0");
  }
  if (transient_force_limit < quasistatic_force_limit) {
    throw ValidationError(path + ".quasistatic_force_limit_n",
                          "must not exceed the transient force limit");
  }
  if (!std::isfinite(damping) || damping < 0.0) {
    throw ValidationError(path + ".damping_ns_per_m", "must be >= 0");
  }
}

HumanMass HumanMass::finite(double kg) {
  if (!positive(kg)) {
    throw std::invalid_argument("human body part mass must be > 0");
  }
  HumanMass m;
  m.kg_ = kg;
  return m;
}

double iso_robot_mass(double moving_mass, double load_mass) {
  if (!positive(moving_mass)) {
    throw std::invalid_argument("total moving mass must be > 0");
  }
  if (!std::isfinite(load_mass) || load_mass < 0.0) {
    throw std::invalid_argument("load mass must be >= 0");
  }
  return moving_mass / 2.0 + load_mass;
}

double effective_mass(double robot_mass, HumanMass human_mass) {
  if (!positive(robot_mass)) {
    throw std::invalid_argument("robot mass must be > 0");
  }
  if (human_mass.is_infinite()) return robot_mass;
  return 1.0 / (1.0 / robot_mass + 1.0 / human_mass.kg());
}

double contact_force(double relative_velocity, double mu, double stiffness) {
  if (!(relative_velocity >= 0.0) || !(mu >= 0.0) || !(stiffness >= 0.0) ||
      !std::isfinite(relative_velocity) || !std::isfinite(mu) || !std::isfinite(stiffness)) {
    throw std::invalid_argument("contact_force inputs must be finite and >= 0");
  }
  return relative_velocity * std::sqrt(mu * stiffness);
}

double velocity_limit(double force_limit, double mu, double stiffness) {
  if (!positive(force_limit) || !positive(mu) || !positive(stiffness)) {
    throw std::invalid_argument("velocity_limit inputs must be > 0");
  }
  return force_limit / std::sqrt(mu * stiffness);
}

std::string_view to_string(ForceDeviation deviation) {
  switch (deviation) {
    case ForceDeviation::correct: return "correct";
    case ForceDeviation::over_10: return "over_10";
    case ForceDeviation::over_100: return "over_100";
    case ForceDeviation::under_10: return "under_10";
    case ForceDeviation::under_100: return "under_100";
  }
  return "correct";
}

ForceDeviation classify_force_deviation(double measured, double expected) {
  if (!(measured >= 0.0) || !(expected >= 0.0)) {
    throw std::invalid_argument("forces must be >= 0");
  }
  const double delta = measured - expected;
  if (std::abs(delta) <= kCorrectBand) return ForceDeviation::correct;
  if (delta < 0.0) {
    return -delta > kLargeBand ? ForceDeviation::over_100 : ForceDeviation::over_10;
  }
  return delta > kLargeBand ? ForceDeviation::under_100 : ForceDeviation::under_10;
}

BodyPartTable::BodyPartTable(std::vector<BodyPartParams> parts) {
  for (auto& p : parts) upsert(std::move(p));
}

const BodyPartParams* BodyPartTable::find(std::string_view name) const {
  auto it = std::find_if(parts_.begin(), parts_.end(),
                         [&](const BodyPartParams& p) { return p.name == name; });
  return it == parts_.end() ? nullptr : &*it;
}

const BodyPartParams& BodyPartTable::lookup(std::string_view name) const {
  if (const auto* part = find(name)) return *part;
  throw std::out_of_range("unknown body part '" + std::string(name) + "'");
}

void BodyPartTable::upsert(BodyPartParams part) {
  part.validate("body_part." + part.name);
  for (auto& existing : parts_) {
    if (existing.name == part.name) {
      existing = std::move(part);
      return;
    }
  }
  parts_.push_back(std::move(part));
}

std::vector<BodyPartParams> builtin_body_parts(double quasistatic_ratio) {
  if (!(quasistatic_ratio > 0.0 && quasistatic_ratio <= 1.0)) {
    throw std::invalid_argument("quasi-static ratio must lie in (0, 1]");
  }
  return {
      {"hand", 0.6, 75.0 * kNewtonPerMillimetre, 280.0, 280.0 * quasistatic_ratio, 0.0},
      {"back", 40.0, 35.0 * kNewtonPerMillimetre, 420.0, 420.0 * quasistatic_ratio, 0.0},
  };
}

std::vector<BodyPartParams> parse_body_parts(std::string_view text, double quasistatic_ratio) {
  using detail::json;
  const json root = detail::parse_json(text);
  if (!root.is_array()) {
    throw ValidationError("<root>", "expected an array of body parts");
  }
  std::vector<BodyPartParams> parts;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string path = detail::element("", i);
    const json& node = root[i];
    detail::require_known_keys(node, path,
                               {"name", "effective_mass_kg", "stiffness_n_per_mm",
                                "transient_force_limit_n", "quasistatic_force_limit_n",
                                "damping_ns_per_m"});
    BodyPartParams part;
    part.name = detail::get_string(detail::require(node, path, "name"), path + ".name");
    part.effective_mass = detail::get_number(detail::require(node, path, "effective_mass_kg"),
                                             path + ".effective_mass_kg");
    part.stiffness = kNewtonPerMillimetre *
                     detail::get_number(detail::require(node, path, "stiffness_n_per_mm"),
                                        path + ".stiffness_n_per_mm");
    part.transient_force_limit =
        detail::get_number(detail::require(node, path, "transient_force_limit_n"),
                           path + ".transient_force_limit_n");
    part.quasistatic_force_limit = part.transient_force_limit * quasistatic_ratio;
    if (auto it = node.find("quasistatic_force_limit_n"); it != node.end()) {
      part.quasistatic_force_limit = detail::get_number(*it, path + ".quasistatic_force_limit_n");
    }
    if (auto it = node.find("damping_ns_per_m"); it != node.end()) {
      part.damping = detail::get_number(*it, path + ".damping_ns_per_m");
    }
    part.validate(path);
    parts.push_back(std::move(part));
  }
  return parts;
}

BodyPartTable load_body_part_table(const std::optional<std::string>& path) {
  BodyPartTable table(builtin_body_parts());
  if (path) {
    for (auto& part : parse_body_parts(detail::read_file(*path))) {
      table.upsert(std::move(part));
    }
  }
  return table;
}

}  // namespace pfl
