#include "pfl/impact_sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pfl {

namespace {

constexpr double kStepsPerPeriod = 50.0;

bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

double spring_damper_force(const ImpactConfig& cfg, double penetration, double rate) {
  if (penetration <= 0.0) return 0.0;
  return std::max(0.0, cfg.stiffness * penetration + cfg.damping * rate);
}

}  // namespace

double max_time_step(double mu, double stiffness) {
  return 2.0 * std::numbers::pi * std::sqrt(mu / stiffness) / kStepsPerPeriod;
}

void ImpactConfig::validate() const {
  if (!(std::isfinite(robot_mass) && robot_mass > 0.0)) {
    throw std::invalid_argument("robot_mass must be > 0");
  }
  if (!non_negative(robot_velocity)) throw std::invalid_argument("robot_velocity must be >= 0");
  if (!(std::isfinite(stiffness) && stiffness > 0.0)) {
    throw std::invalid_argument("stiffness must be > 0");
  }
  if (!non_negative(damping)) throw std::invalid_argument("damping must be >= 0");
  if (detection_force && !non_negative(*detection_force)) {
    throw std::invalid_argument("detection_force must be >= 0");
  }
  if (!non_negative(reaction_delay)) throw std::invalid_argument("reaction_delay must be >= 0");
  if (!non_negative(retraction_velocity)) {
    throw std::invalid_argument("retraction_velocity must be >= 0");
  }
  if (!non_negative(drive_force)) throw std::invalid_argument("drive_force must be >= 0");
  if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double limit = max_time_step(effective_mass(), stiffness);
  if (dt > limit) {
    throw std::invalid_argument("dt exceeds the stability limit of " + std::to_string(limit) +
                                " s (50 steps per contact period)");
  }
  if (!(std::isfinite(duration) && duration >= 10.0 * dt)) {
    throw std::invalid_argument("duration must cover at least 10 steps");
  }
}

std::vector<ImpactState> simulate_states(const ImpactConfig& cfg) {
  cfg.validate();
  const auto steps = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  const bool clamped = cfg.human_mass.is_infinite();
  const double h = cfg.dt;

  std::vector<ImpactState> states;
  states.reserve(steps + 1);
  ImpactState s;
  s.robot_velocity = cfg.robot_velocity;

  bool touched = false;
  std::optional<double> retract_at;
  for (std::size_t n = 0;; ++n) {
    s.time = static_cast<double>(n) * h;
    s.force = spring_damper_force(cfg, s.penetration(), s.penetration_rate());
    states.push_back(s);
    if (n == steps) break;

    if (s.force > 0.0) touched = true;
    if (cfg.detection_force && !retract_at && s.force > *cfg.detection_force) {
      retract_at = s.time + cfg.reaction_delay;
    }
    const bool retracting = retract_at && s.time >= *retract_at - 0.5 * h;

    if (retracting) {
      s.robot_velocity = -cfg.retraction_velocity;
    } else {
      const double drive = touched ? cfg.drive_force : 0.0;
      s.robot_velocity += h * (drive - s.force) / cfg.robot_mass;
    }
    if (!clamped) {
      s.human_velocity += h * s.force / cfg.human_mass.kg();
    }
    s.robot_position += h * s.robot_velocity;
    s.human_position += h * s.human_velocity;
  }
  return states;
}

ForceTrace simulate(const ImpactConfig& cfg) {
  const auto states = simulate_states(cfg);
  std::vector<ForceSample> samples;
  samples.reserve(states.size());
  for (const auto& s : states) samples.push_back({s.time, s.force});
  return ForceTrace(std::move(samples), TraceSource::simulated);
}

double peak_force_analytic(const ImpactConfig& cfg) {
  if (cfg.damping != 0.0 || cfg.detection_force || cfg.drive_force != 0.0) {
    throw std::invalid_argument(
        "the closed-form peak holds only without damping, collision reaction or drive force");
  }
  return contact_force(cfg.robot_velocity, cfg.effective_mass(), cfg.stiffness);
}

double mechanical_energy(const ImpactConfig& cfg, const ImpactState& s) {
  double energy = 0.5 * cfg.robot_mass * s.robot_velocity * s.robot_velocity;
  if (!cfg.human_mass.is_infinite()) {
    energy += 0.5 * cfg.human_mass.kg() * s.human_velocity * s.human_velocity;
  }
  const double penetration = std::max(0.0, s.penetration());
  return energy + 0.5 * cfg.stiffness * penetration * penetration;
}

double discrete_energy(const ImpactConfig& cfg, const ImpactState& s) {
  return mechanical_energy(cfg, s) -
         0.5 * cfg.dt * cfg.stiffness * s.penetration() * s.penetration_rate();
}

}  // namespace pfl
