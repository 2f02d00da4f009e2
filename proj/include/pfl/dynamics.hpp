#pragma once

#include "pfl/robot_model.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <string>
#include <vector>

namespace pfl {

/// Point of impact on the robot surface. `point` is in the base frame at the
/// configuration being evaluated; `direction` is normalized on construction.
class ContactFrame {
 public:
  ContactFrame(Eigen::Vector3d point, const Eigen::Vector3d& direction, std::string attached_link);

  const Eigen::Vector3d& point() const { return point_; }
  const Eigen::Vector3d& direction() const { return direction_; }
  const std::string& attached_link() const { return attached_link_; }

 private:
  Eigen::Vector3d point_;
  Eigen::Vector3d direction_;
  std::string attached_link_;
};

/// Base-to-link transform for every link, in model order.
std::vector<Eigen::Isometry3d> forward_kinematics(const RobotModel& model,
                                                  const JointConfiguration& q);

/// Linear-velocity Jacobian (3 x dof) of a point rigidly attached to `link`.
/// Columns of joints that do not move the link are zero.
Eigen::Matrix<double, 3, Eigen::Dynamic> point_jacobian(const RobotModel& model,
                                                        const JointConfiguration& q,
                                                        std::size_t link,
                                                        const Eigen::Vector3d& point);

Eigen::Matrix<double, 3, Eigen::Dynamic> contact_jacobian(const RobotModel& model,
                                                          const JointConfiguration& q,
                                                          const ContactFrame& contact);

/// Angular-velocity Jacobian (3 x dof) of `link`.
Eigen::Matrix<double, 3, Eigen::Dynamic> angular_jacobian(const RobotModel& model,
                                                          const JointConfiguration& q,
                                                          std::size_t link);

/// Joint-space mass matrix, accumulated as sum_i Jv_i^T m_i Jv_i + Jw_i^T I_i Jw_i
/// over the link COMs.
Eigen::MatrixXd mass_matrix(const RobotModel& model, const JointConfiguration& q);

/// Kinetic energy from per-link COM velocity and angular velocity. Independent of
/// mass_matrix(); used to cross-check it.
double link_kinetic_energy(const RobotModel& model, const JointConfiguration& q,
                           const Eigen::VectorXd& qdot);

/// Translational block of the inverse Cartesian mass matrix, J M^-1 J^T.
/// Throws ModelError when M is not positive definite.
Eigen::Matrix3d inverse_cartesian_mass(const RobotModel& model, const JointConfiguration& q,
                                       const ContactFrame& contact);

/// Mass perceived at the contact point along the impact direction.
class ReflectedMass {
 public:
  /// u^T Lambda^-1 u below this value [1/kg] counts as a near-singular direction.
  static constexpr double kSingularThreshold = 1e-9;

  explicit ReflectedMass(double inverse_mass) : inverse_mass_(inverse_mass) {}

  bool bounded() const { return inverse_mass_ >= kSingularThreshold; }
  /// Requires bounded().
  double kg() const { return 1.0 / inverse_mass_; }
  double inverse_kg() const { return inverse_mass_; }

 private:
  double inverse_mass_;
};

ReflectedMass reflected_mass(const RobotModel& model, const JointConfiguration& q,
                             const ContactFrame& contact);

}  // namespace pfl
