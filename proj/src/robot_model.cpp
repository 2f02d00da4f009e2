#include "pfl/robot_model.hpp"

#include "json_util.hpp"
#include "pfl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pfl {

using detail::json;

std::string_view to_string(JointType type) {
  switch (type) {
    case JointType::revolute: return "revolute";
    case JointType::prismatic: return "prismatic";
    case JointType::fixed: return "fixed";
  }
  return "fixed";
}

namespace {

constexpr double kAxisNormTolerance = 1e-9;

void validate_link(const LinkSpec& link, const std::string& path) {
  if (link.name.empty()) {
    throw ValidationError(path + ".name", "must not be empty");
  }
  if (!std::isfinite(link.mass) || link.mass < 0.0) {
    throw ValidationError(path + ".mass_kg", "mass must be finite and >= 0");
  }
  if (std::abs(link.joint_axis.norm() - 1.0) > kAxisNormTolerance) {
    throw ValidationError(path + ".joint_axis", "axis must have unit norm");
  }
  const Eigen::Matrix3d& I = link.inertia;
  if (!I.allFinite() || (I - I.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + I.norm())) {
    throw ValidationError(path + ".inertia_kgm2", "inertia must be symmetric");
  }
  const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(I, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
  if (smallest < -1e-12 * (1.0 + I.norm())) {
    throw ValidationError(path + ".inertia_kgm2", "inertia must be positive semidefinite");
  }
  if (!link.origin_translation.allFinite() || !link.origin_rotation.allFinite() ||
      !link.com.allFinite()) {
    throw ValidationError(path, "non-finite geometry");
  }
}

JointType parse_joint_type(const json& value, const std::string& path) {
  const std::string text = detail::get_string(value, path);
  if (text == "revolute") return JointType::revolute;
  if (text == "prismatic") return JointType::prismatic;
  if (text == "fixed") return JointType::fixed;
  throw ValidationError(path, "unknown joint type '" + text + "'");
}

Eigen::Matrix3d parse_inertia(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 6) {
    throw ValidationError(path, "expected [Ixx, Iyy, Izz, Ixy, Ixz, Iyz]");
  }
  double v[6];
  for (std::size_t i = 0; i < 6; ++i) {
    v[i] = detail::get_number(value[i], detail::element(path, i));
  }
  Eigen::Matrix3d I;
  I << v[0], v[3], v[4],
       v[3], v[1], v[5],
       v[4], v[5], v[2];
  return I;
}

LinkSpec parse_link(const json& node, const std::string& path) {
  detail::require_known_keys(node, path,
                             {"name", "joint_type", "joint_axis", "origin_xyz_m", "origin_rpy_rad",
                              "mass_kg", "com_m", "inertia_kgm2", "order"});
  LinkSpec link;
  link.name = detail::get_string(detail::require(node, path, "name"), path + ".name");
  link.joint_type =
      parse_joint_type(detail::require(node, path, "joint_type"), path + ".joint_type");
  link.mass = detail::get_number(detail::require(node, path, "mass_kg"), path + ".mass_kg");
  if (auto it = node.find("joint_axis"); it != node.end()) {
    link.joint_axis = detail::get_vector3(*it, path + ".joint_axis");
  }
  if (auto it = node.find("origin_xyz_m"); it != node.end()) {
    link.origin_translation = detail::get_vector3(*it, path + ".origin_xyz_m");
  }
  if (auto it = node.find("origin_rpy_rad"); it != node.end()) {
    link.origin_rotation = detail::get_vector3(*it, path + ".origin_rpy_rad");
  }
  if (auto it = node.find("com_m"); it != node.end()) {
    link.com = detail::get_vector3(*it, path + ".com_m");
  }
  if (auto it = node.find("inertia_kgm2"); it != node.end()) {
    link.inertia = parse_inertia(*it, path + ".inertia_kgm2");
  }
  if (auto it = node.find("order"); it != node.end()) {
    if (!it->is_number_integer()) {
      throw ValidationError(path + ".order", "expected an integer");
    }
    link.order = it->get<int>();
  }
  return link;
}

json vector_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

RobotModel::RobotModel(std::string name, std::vector<LinkSpec> links, double payload_mass,
                       double adapter_mass,
                       std::map<std::string, Eigen::Vector3d> reference_positions)
    : name_(std::move(name)),
      links_(std::move(links)),
      payload_mass_(payload_mass),
      adapter_mass_(adapter_mass),
      reference_positions_(std::move(reference_positions)) {
  if (links_.empty()) {
    throw ValidationError("links", "at least one link is required");
  }
  if (!std::isfinite(payload_mass_) || payload_mass_ < 0.0) {
    throw ValidationError("payload_mass_kg", "must be finite and >= 0");
  }
  if (!std::isfinite(adapter_mass_) || adapter_mass_ < 0.0) {
    throw ValidationError("adapter_mass_kg", "must be finite and >= 0");
  }

  const auto with_order = std::count_if(links_.begin(), links_.end(),
                                        [](const LinkSpec& l) { return l.order.has_value(); });
  if (with_order != 0) {
    if (with_order != static_cast<long>(links_.size())) {
      throw ValidationError("links", "order must be given for every link or for none");
    }
    std::stable_sort(links_.begin(), links_.end(),
                     [](const LinkSpec& a, const LinkSpec& b) { return *a.order < *b.order; });
    for (std::size_t i = 1; i < links_.size(); ++i) {
      if (*links_[i].order == *links_[i - 1].order) {
        throw ValidationError(detail::element("links", i) + ".order", "duplicate order value");
      }
    }
  }

  std::set<std::string> names;
  joint_index_.reserve(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const std::string path = detail::element("links", i);
    validate_link(links_[i], path);
    if (!names.insert(links_[i].name).second) {
      throw ValidationError(path + ".name", "duplicate link name '" + links_[i].name + "'");
    }
    joint_index_.push_back(links_[i].is_moving_joint() ? dof_++ : -1);
  }
  for (const auto& [label, p] : reference_positions_) {
    if (!p.allFinite()) {
      throw ValidationError("reference_positions_m." + label, "non-finite coordinate");
    }
  }
}

std::optional<std::size_t> RobotModel::link_index(std::string_view name) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (links_[i].name == name) return i;
  }
  return std::nullopt;
}

JointConfiguration::JointConfiguration(std::initializer_list<double> values)
    : q(static_cast<Eigen::Index>(values.size())) {
  Eigen::Index i = 0;
  for (double v : values) q[i++] = v;
}

void check_configuration(const RobotModel& model, const JointConfiguration& q) {
  if (q.size() != model.dof()) {
    throw ModelError("joint configuration has " + std::to_string(q.size()) +
                     " values but the model has " + std::to_string(model.dof()) +
                     " degrees of freedom");
  }
  if (!q.q.allFinite()) {
    throw ModelError("joint configuration contains non-finite values");
  }
}

RobotModel parse_robot(std::string_view text) {
  const json root = detail::parse_json(text);
  detail::require_known_keys(root, "", {"name", "payload_mass_kg", "adapter_mass_kg", "links",
                                        "reference_positions_m"});
  const std::string name = detail::get_string(detail::require(root, "", "name"), "name");
  double payload = 0.0;
  double adapter = 0.0;
  if (auto it = root.find("payload_mass_kg"); it != root.end()) {
    payload = detail::get_number(*it, "payload_mass_kg");
  }
  if (auto it = root.find("adapter_mass_kg"); it != root.end()) {
    adapter = detail::get_number(*it, "adapter_mass_kg");
  }

  const json& links_node = detail::require(root, "", "links");
  if (!links_node.is_array()) {
    throw ValidationError("links", "expected an array");
  }
  std::vector<LinkSpec> links;
  for (std::size_t i = 0; i < links_node.size(); ++i) {
    links.push_back(parse_link(links_node[i], detail::element("links", i)));
  }

  std::map<std::string, Eigen::Vector3d> positions;
  if (auto it = root.find("reference_positions_m"); it != root.end()) {
    if (!it->is_object()) {
      throw ValidationError("reference_positions_m", "expected an object");
    }
    for (const auto& [label, value] : it->items()) {
      positions[label] = detail::get_vector3(value, "reference_positions_m." + label);
    }
  }
  return RobotModel(name, std::move(links), payload, adapter, std::move(positions));
}

RobotModel load_robot(const std::string& path) { return parse_robot(detail::read_file(path)); }

std::string serialize_robot(const RobotModel& model) {
  json root;
  root["name"] = model.name();
  root["payload_mass_kg"] = model.payload_mass();
  root["adapter_mass_kg"] = model.adapter_mass();
  json links = json::array();
  for (const LinkSpec& link : model.links()) {
    const Eigen::Matrix3d& I = link.inertia;
    json node = {
        {"name", link.name},
        {"joint_type", std::string(to_string(link.joint_type))},
        {"joint_axis", vector_json(link.joint_axis)},
        {"origin_xyz_m", vector_json(link.origin_translation)},
        {"origin_rpy_rad", vector_json(link.origin_rotation)},
        {"mass_kg", link.mass},
        {"com_m", vector_json(link.com)},
        {"inertia_kgm2", json::array({I(0, 0), I(1, 1), I(2, 2), I(0, 1), I(0, 2), I(1, 2)})},
    };
    if (link.order) node["order"] = *link.order;
    links.push_back(std::move(node));
  }
  root["links"] = std::move(links);
  json positions = json::object();
  for (const auto& [label, p] : model.reference_positions()) {
    positions[label] = vector_json(p);
  }
  root["reference_positions_m"] = std::move(positions);
  return root.dump(2) + "\n";
}

double total_moving_mass(const RobotModel& model) {
  const auto& links = model.links();
  auto first = std::find_if(links.begin(), links.end(),
                            [](const LinkSpec& l) { return l.is_moving_joint(); });
  double total = 0.0;
  for (auto it = first; it != links.end(); ++it) total += it->mass;
  return total;
}

}  // namespace pfl
