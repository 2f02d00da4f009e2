#include "pfl/dynamics.hpp"

#include "pfl/errors.hpp"

#include <cmath>

namespace pfl {

namespace {

Eigen::Matrix3d rpy_rotation(const Eigen::Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

// Joint frames (before joint motion) and link frames for every link.
struct ChainFrames {
  std::vector<Eigen::Isometry3d> joint;
  std::vector<Eigen::Isometry3d> link;
};

ChainFrames chain_frames(const RobotModel& model, const JointConfiguration& q) {
  check_configuration(model, q);
  ChainFrames frames;
  const auto& links = model.links();
  frames.joint.reserve(links.size());
  frames.link.reserve(links.size());
  Eigen::Isometry3d parent = Eigen::Isometry3d::Identity();
  for (std::size_t i = 0; i < links.size(); ++i) {
    const LinkSpec& spec = links[i];
    Eigen::Isometry3d origin = Eigen::Isometry3d::Identity();
    origin.translate(spec.origin_translation);
    origin.rotate(rpy_rotation(spec.origin_rotation));
    const Eigen::Isometry3d joint = parent * origin;

    Eigen::Isometry3d motion = Eigen::Isometry3d::Identity();
    const int j = model.joint_index(i);
    if (spec.joint_type == JointType::revolute) {
      motion.rotate(Eigen::AngleAxisd(q.q[j], spec.joint_axis));
    } else if (spec.joint_type == JointType::prismatic) {
      motion.translate(q.q[j] * spec.joint_axis);
    }
    frames.joint.push_back(joint);
    frames.link.push_back(joint * motion);
    parent = frames.link.back();
  }
  return frames;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> linear_jacobian(const RobotModel& model,
                                                         const ChainFrames& frames,
                                                         std::size_t link,
                                                         const Eigen::Vector3d& point) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> J =
      Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, model.dof());
  for (std::size_t i = 0; i <= link; ++i) {
    const int j = model.joint_index(i);
    if (j < 0) continue;
    const LinkSpec& spec = model.links()[i];
    const Eigen::Vector3d axis = frames.joint[i].linear() * spec.joint_axis;
    if (spec.joint_type == JointType::revolute) {
      J.col(j) = axis.cross(point - frames.joint[i].translation());
    } else {
      J.col(j) = axis;
    }
  }
  return J;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> rotational_jacobian(const RobotModel& model,
                                                             const ChainFrames& frames,
                                                             std::size_t link) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> J =
      Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, model.dof());
  for (std::size_t i = 0; i <= link; ++i) {
    const int j = model.joint_index(i);
    if (j < 0 || model.links()[i].joint_type != JointType::revolute) continue;
    J.col(j) = frames.joint[i].linear() * model.links()[i].joint_axis;
  }
  return J;
}

std::size_t require_link(const RobotModel& model, const std::string& name) {
  const auto index = model.link_index(name);
  if (!index) {
    throw ModelError("unknown link '" + name + "'");
  }
  return *index;
}

}  // namespace

ContactFrame::ContactFrame(Eigen::Vector3d point, const Eigen::Vector3d& direction,
                           std::string attached_link)
    : point_(std::move(point)), attached_link_(std::move(attached_link)) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("contact.direction", "direction must be a non-zero finite vector");
  }
  if (!point_.allFinite()) {
    throw ValidationError("contact.point", "non-finite coordinate");
  }
  direction_ = direction / norm;
}

std::vector<Eigen::Isometry3d> forward_kinematics(const RobotModel& model,
                                                  const JointConfiguration& q) {
  return chain_frames(model, q).link;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> point_jacobian(const RobotModel& model,
                                                        const JointConfiguration& q,
                                                        std::size_t link,
                                                        const Eigen::Vector3d& point) {
  if (link >= model.links().size()) {
    throw ModelError("link index out of range");
  }
  return linear_jacobian(model, chain_frames(model, q), link, point);
}

Eigen::Matrix<double, 3, Eigen::Dynamic> contact_jacobian(const RobotModel& model,
                                                          const JointConfiguration& q,
                                                          const ContactFrame& contact) {
  return point_jacobian(model, q, require_link(model, contact.attached_link()), contact.point());
}

Eigen::Matrix<double, 3, Eigen::Dynamic> angular_jacobian(const RobotModel& model,
                                                          const JointConfiguration& q,
                                                          std::size_t link) {
  if (link >= model.links().size()) {
    throw ModelError("link index out of range");
  }
  return rotational_jacobian(model, chain_frames(model, q), link);
}

Eigen::MatrixXd mass_matrix(const RobotModel& model, const JointConfiguration& q) {
  const ChainFrames frames = chain_frames(model, q);
  const int n = model.dof();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < model.links().size(); ++i) {
    const LinkSpec& spec = model.links()[i];
    const Eigen::Vector3d com = frames.link[i] * spec.com;
    const auto Jv = linear_jacobian(model, frames, i, com);
    const auto Jw = rotational_jacobian(model, frames, i);
    const Eigen::Matrix3d R = frames.link[i].linear();
    const Eigen::Matrix3d I = R * spec.inertia * R.transpose();
    M.noalias() += spec.mass * Jv.transpose() * Jv;
    M.noalias() += Jw.transpose() * I * Jw;
  }
  // Remove round-off asymmetry.
  return 0.5 * (M + M.transpose());
}

double link_kinetic_energy(const RobotModel& model, const JointConfiguration& q,
                           const Eigen::VectorXd& qdot) {
  check_configuration(model, q);
  if (qdot.size() != model.dof()) {
    throw ModelError("joint velocity has the wrong dimension");
  }
  // Propagate twists link by link: v_i = v_parent + w_parent x r + joint contribution.
  const ChainFrames frames = chain_frames(model, q);
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d origin_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double energy = 0.0;
  for (std::size_t i = 0; i < model.links().size(); ++i) {
    const LinkSpec& spec = model.links()[i];
    const Eigen::Vector3d joint_origin = frames.joint[i].translation();
    origin_velocity += omega.cross(joint_origin - origin);
    origin = joint_origin;
    const int j = model.joint_index(i);
    const Eigen::Vector3d axis = frames.joint[i].linear() * spec.joint_axis;
    if (spec.joint_type == JointType::revolute) {
      omega += axis * qdot[j];
    } else if (spec.joint_type == JointType::prismatic) {
      origin_velocity += axis * qdot[j];
    }
    // Prismatic motion shifts the link origin away from the joint origin.
    const Eigen::Vector3d link_origin = frames.link[i].translation();
    origin_velocity += omega.cross(link_origin - origin);
    origin = link_origin;

    const Eigen::Vector3d com = frames.link[i] * spec.com;
    const Eigen::Vector3d v_com = origin_velocity + omega.cross(com - origin);
    const Eigen::Matrix3d R = frames.link[i].linear();
    const Eigen::Vector3d omega_local = R.transpose() * omega;
    energy += 0.5 * spec.mass * v_com.squaredNorm() +
              0.5 * omega_local.dot(spec.inertia * omega_local);
  }
  return energy;
}

Eigen::Matrix3d inverse_cartesian_mass(const RobotModel& model, const JointConfiguration& q,
                                       const ContactFrame& contact) {
  if (model.dof() == 0) {
    throw ModelError("model has no moving joints");
  }
  const Eigen::MatrixXd M = mass_matrix(model, q);
  const Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw ModelError("mass matrix is not positive definite");
  }
  const auto J = contact_jacobian(model, q, contact);
  const Eigen::MatrixXd MinvJt = llt.solve(J.transpose());
  Eigen::Matrix3d inv = J * MinvJt;
  return 0.5 * (inv + inv.transpose());
}

ReflectedMass reflected_mass(const RobotModel& model, const JointConfiguration& q,
                             const ContactFrame& contact) {
  const Eigen::Matrix3d inv = inverse_cartesian_mass(model, q, contact);
  const Eigen::Vector3d& u = contact.direction();
  return ReflectedMass(u.dot(inv * u));
}

}  // namespace pfl
