#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lltorus/elliptic.hpp"
#include "lltorus/scattering.hpp"

namespace lltorus {

struct PdeControls {
  double dx = 0.05;
  double dt_factor = 0.2;       // dt = dt_factor dx^2
  double cfl_limit = 0.5;       // RK4 on the 4th-order Laplacian is stable to about 0.53 dx^2
  double norm_bound = 1e-8;     // largest | |L|^2 - 1 | allowed before projection
  double energy_bound = 1e-6;   // energy drift per unit time reported as within bounds
  // Speed of the domain growth.  Zero selects the largest linear group
  // velocity over wavenumbers whose spectral weight exceeds spectrum_tol.
  double speed = 0;
  double spectrum_tol = 1e-6;
  double margin = 5.0;          // extra background added beyond X + speed t_final
  std::vector<double> checkpoints;
};

struct PdeMonitors {
  double energy0 = 0, energy = 0;
  Vec3 momentum0 = Vec3::Zero(), momentum = Vec3::Zero();  // sum_j (dL/dx x L) dx
  double tmomentum0 = 0, tmomentum = 0;  // sum (L1 dL2/dx - L2 dL1/dx)/(1 + L3) dx
  double max_norm_defect = 0;           // before projection, over all steps
  double energy_drift_rate = 0;         // |E - E0| / t
  double momentum_drift_rate = 0;       // max_j |P_j - P_j(0)| / t
  double tmomentum_drift_rate = 0;
  bool energy_within_bound = true;
};

struct SimulationState {
  SpinField field;
  double t = 0;
  double dt = 0;
  double dx = 0;
  double speed = 0;
  long steps = 0;
  std::string scheme = "central4-rk4-projected";
  PdeMonitors monitors;
  std::vector<std::pair<double, SpinField>> checkpoints;
};

// Largest omega'(q) = q (2 q^2 + 2 J3 - J1 - J2) / omega over |q| <= qmax,
// omega^2 = (q^2 + J3 - J1)(q^2 + J3 - J2).
double ll_linear_frequency(const AnisotropyParams& J, double q);
double ll_group_velocity(const AnisotropyParams& J, double q);

// Energy density 1/2 |dL/dx|^2 + 1/2 sum_j (J3 - Jj) L_j^2 summed with weight dx.
double ll_energy(const AnisotropyParams& J, const std::vector<Vec3>& L, double dx);

// dL/dt = L x d^2L/dx^2 + L x J L on [-X', X'] with L = (0, 0, 1) beyond it.
// The field is resampled to controls.dx and padded to
// X' = X + speed t_final + margin.  Throws Domain on a CFL violation and
// Integration when the pre-projection norm defect exceeds the bound.
SimulationState ll_evolve(const AnisotropyParams& J, const SpinField& field, double t_final,
                          const PdeControls& controls = {});

}  // namespace lltorus
