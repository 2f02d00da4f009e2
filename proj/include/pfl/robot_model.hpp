#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfl {

enum class JointType { revolute, prismatic, fixed };

std::string_view to_string(JointType type);

/// One link of a serial chain together with the joint that connects it to its
/// parent (the previous link in the list).
///
/// The joint frame is placed at `origin_translation` / `origin_rotation`
/// relative to the parent link frame; the rotation uses roll-pitch-yaw about
/// fixed X, Y, Z axes (R = Rz(yaw) * Ry(pitch) * Rx(roll)). Joint motion is then
/// applied about/along `joint_axis`, giving the link frame. COM and inertia are
/// expressed in the link frame.
struct LinkSpec {
  std::string name;
  JointType joint_type = JointType::fixed;
  Eigen::Vector3d joint_axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d origin_translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d origin_rotation = Eigen::Vector3d::Zero();
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
  /// Explicit kinematic position; when every link carries one the document
  /// order is irrelevant.
  std::optional<int> order;

  bool is_moving_joint() const { return joint_type != JointType::fixed; }
};

/// Immutable description of a serial manipulator plus its payload.
class RobotModel {
 public:
  RobotModel() = default;

  /// Validates every invariant and throws ValidationError naming the field.
  RobotModel(std::string name, std::vector<LinkSpec> links, double payload_mass,
             double adapter_mass,
             std::map<std::string, Eigen::Vector3d> reference_positions = {});

  const std::string& name() const { return name_; }
  const std::vector<LinkSpec>& links() const { return links_; }
  double payload_mass() const { return payload_mass_; }
  double adapter_mass() const { return adapter_mass_; }
  const std::map<std::string, Eigen::Vector3d>& reference_positions() const {
    return reference_positions_;
  }

  /// Number of non-fixed joints.
  int dof() const { return dof_; }

  /// Index into links() of the link with this name, if any.
  std::optional<std::size_t> link_index(std::string_view name) const;

  /// Joint-vector index for link `i`, or -1 for fixed joints.
  int joint_index(std::size_t link) const { return joint_index_[link]; }

  /// Index of the last link (the flange).
  std::size_t flange_index() const { return links_.size() - 1; }

 private:
  std::string name_;
  std::vector<LinkSpec> links_;
  double payload_mass_ = 0.0;
  double adapter_mass_ = 0.0;
  std::map<std::string, Eigen::Vector3d> reference_positions_;
  std::vector<int> joint_index_;
  int dof_ = 0;
};

/// Joint positions [rad or m], one per non-fixed joint.
struct JointConfiguration {
  Eigen::VectorXd q;

  JointConfiguration() = default;
  explicit JointConfiguration(Eigen::VectorXd values) : q(std::move(values)) {}
  JointConfiguration(std::initializer_list<double> values);

  Eigen::Index size() const { return q.size(); }
};

/// Throws ModelError unless `q` matches the model's degrees of freedom.
void check_configuration(const RobotModel& model, const JointConfiguration& q);

/// Parses the JSON robot-description document. Syntax errors raise ParseError
/// with line/column; schema and invariant violations raise ValidationError with
/// the offending field path.
RobotModel parse_robot(std::string_view text);

/// Reads and parses a robot-description file.
RobotModel load_robot(const std::string& path);

/// Canonical JSON document for `model`; parse_robot() of the result yields an
/// identical model.
std::string serialize_robot(const RobotModel& model);

/// Total mass of all links distal to, and including, the first non-fixed
/// joint. Links rigidly fixed to the base are excluded.
double total_moving_mass(const RobotModel& model);

}  // namespace pfl
