#pragma once

namespace pfl {

/// Time budget of one experimental force validation [h].
struct CostParams {
  double setup_h = 0.5;    // preparation per position and robot adjustment
  double adjust_h = 0.05;  // one robot speed adjustment
  double repeat_h = 0.02;  // one repetition of the measurement
  int repeats = 3;
  int trials = 6;  // speed adjustments until a compliant setting is found

  /// Throws std::invalid_argument for negative durations or counts below 1.
  void validate() const;
};

/// setup + trials * adjust + repeats * repeat, for one position and body part.
double cost_per_configuration(const CostParams& params);

/// positions * body_parts * per_configuration_h.
double cost_total(double per_configuration_h, int positions, int body_parts);
double cost_total(const CostParams& params, int positions, int body_parts);

/// Rounds to two decimals, the precision the totals are reported at.
double round_hours(double hours);

}  // namespace pfl
