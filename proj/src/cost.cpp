#include "pfl/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace pfl {

void CostParams::validate() const {
  for (double v : {setup_h, adjust_h, repeat_h}) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("durations must be >= 0");
  }
  if (repeats < 1 || trials < 1) throw std::invalid_argument("repeats and trials must be >= 1");
}

double cost_per_configuration(const CostParams& params) {
  params.validate();
  return params.setup_h + params.trials * params.adjust_h + params.repeats * params.repeat_h;
}

double cost_total(double per_configuration_h, int positions, int body_parts) {
  if (!std::isfinite(per_configuration_h) || per_configuration_h < 0.0) {
    throw std::invalid_argument("per-configuration cost must be >= 0");
  }
  if (positions < 1 || body_parts < 1) {
    throw std::invalid_argument("positions and body parts must be >= 1");
  }
  return positions * body_parts * per_configuration_h;
}

double cost_total(const CostParams& params, int positions, int body_parts) {
  return cost_total(cost_per_configuration(params), positions, body_parts);
}

double round_hours(double hours) { return std::round(hours * 100.0) / 100.0; }

}  // namespace pfl
