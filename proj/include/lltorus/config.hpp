#pragma once

namespace lltorus {

// Numerical defaults shared by all modules.  Every field can be
// overridden from an experiment config.
struct Tolerances {
  double guard_radius = 1e-8;   // exclusion radius around poles
  double det_floor = 1e-13;     // below this |det| a 2x2 matrix is treated as singular
  double tail_eps = 1e-10;      // |L(+-X) - e3| allowed at the truncation boundary
  double unit_norm = 1e-12;     // | |L|^2 - 1 | per sample
  double theta_series = 1e-17;  // truncation of theta-function series
  double jost_rtol = 1e-10;     // adaptive RK tolerances for Jost solutions
  double jost_atol = 1e-12;
  double jost_min_step = 1e-9;
  double symmetrize_floor = 1e-10;  // |c| below this means Y is singular
  double exponent_cap = 700.0;      // |Im| of jump phase beyond this overflows
  double sie_residual = 1e-9;
  double norm_check = 1e-8;         // sum L_j^2 = 1 after reconstruction
  double contour_density = 1e-6;    // density below which a point on the contour is off the support
};

Tolerances& default_tolerances();

}  // namespace lltorus
