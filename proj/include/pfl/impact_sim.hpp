#pragma once

#include "pfl/contact_model.hpp"
#include "pfl/trace.hpp"

#include <optional>
#include <vector>

namespace pfl {

/// One-dimensional robot/human impact through a unilateral spring-damper.
/// The robot moves in +x towards the human, who starts at rest with the spring
/// just touching (zero penetration at t = 0).
struct ImpactConfig {
  double robot_mass = 1.0;      // [kg]
  double robot_velocity = 0.0;  // [m/s], approach speed at t = 0
  HumanMass human_mass = HumanMass::infinite();
  double stiffness = 75000.0;  // [N/m]
  double damping = 0.0;        // [N s/m]
  /// Force that triggers the collision reaction; empty disables it.
  std::optional<double> detection_force;
  double reaction_delay = 0.0;       // [s] from detection to retraction
  double retraction_velocity = 0.0;  // [m/s] commanded away from the human
  /// Constant push of the robot drive once contact has been made [N]. Zero gives
  /// a free-flying robot mass.
  double drive_force = 0.0;
  double duration = 0.05;  // [s]
  double dt = 1e-5;        // [s]

  /// Mass governing the contact oscillation.
  double effective_mass() const { return pfl::effective_mass(robot_mass, human_mass); }

  /// Throws std::invalid_argument when a parameter is out of range or dt does not
  /// resolve the contact oscillation with at least 50 steps per period.
  void validate() const;
};

struct ImpactState {
  double time = 0.0;
  double robot_position = 0.0;
  double robot_velocity = 0.0;
  double human_position = 0.0;
  double human_velocity = 0.0;
  double force = 0.0;  // contact force evaluated at this state

  double penetration() const { return robot_position - human_position; }
  double penetration_rate() const { return robot_velocity - human_velocity; }
};

/// Largest step resolving the contact oscillation: period / 50.
double max_time_step(double mu, double stiffness);

/// Fixed-step semi-implicit Euler integration, one state per step including t = 0.
std::vector<ImpactState> simulate_states(const ImpactConfig& cfg);

/// Sampled contact force at every step.
ForceTrace simulate(const ImpactConfig& cfg);

/// v sqrt(mu k) for undamped runs without collision reaction or drive force.
/// Throws std::invalid_argument otherwise.
double peak_force_analytic(const ImpactConfig& cfg);

/// Kinetic plus spring energy of a state.
double mechanical_energy(const ImpactConfig& cfg, const ImpactState& s);

/// Energy-like quantity preserved exactly by the integrator for undamped contact:
/// mechanical energy minus (dt/2) k delta delta_dot. Valid while in contact.
double discrete_energy(const ImpactConfig& cfg, const ImpactState& s);

}  // namespace pfl
