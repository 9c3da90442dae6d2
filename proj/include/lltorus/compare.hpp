#pragma once

#include <array>
#include <vector>

#include "lltorus/asymptotics.hpp"
#include "lltorus/pde.hpp"
#include "lltorus/rhp.hpp"

namespace lltorus {

// r(lambda) on Gamma1 (Im lambda = 0) or Gamma2 (Im lambda = 2K') by
// trigonometric interpolation of node samples along that line; Domain elsewhere.
ReflectionFn reflection_interpolant(const ContourGrid& grid, const std::vector<cplx>& r_nodes);

struct LogLogFit {
  double slope = 0, intercept = 0;  // log y = intercept + slope log x
  double at(double x) const;
};
// Least squares on (log x, log y); Domain for fewer than two points or y <= 0.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct RhpSettings {
  double points_per_wavelength = 3.0;
  int min_n = 256;
  SolverOptions solver;
};

struct ComparisonRow {
  double t = 0, x = 0;
  int nodes = 0;
  LVector rhp;
  AsymptoticL asym;
  std::array<double, 3> residual{};  // |L_rhp - L_asym| per component
  double sup = 0;                    // largest of the three
  double jump_residual = 0;
};

struct RhpComparison {
  double kappa = 0;
  std::vector<ComparisonRow> rows;
  std::array<LogLogFit, 3> fits;  // per component against t
  LogLogFit sup_fit;
};
// Numerical RHP at x = kappa t against asymptotic_L for each t.
RhpComparison compare_rhp_asymptotics(const Torus& T, const ReflectionFn& r, double kappa,
                                      const std::vector<double>& t_list, const RhpSettings& s = {});

// L(x, 0) from r by the t = 0 RHP at x = -X, -X + dx, ..., X; the end samples
// are set to (0, 0, 1) and every sample is normalized.
SpinField field_from_reflection(const Torus& T, const ReflectionFn& r, double X, double dx, const RhpSettings& s = {});

struct PdeComparisonRow {
  double x = 0;
  Vec3 pde = Vec3::Zero();
  AsymptoticL asym;
  double sup = 0;
};
struct PdeComparison {
  double t = 0;
  SimulationState state;
  std::vector<PdeComparisonRow> rows;
  double sup = 0;
};
// Evolves `initial` to t and compares with asymptotic_L at x = kappa t for each kappa.
PdeComparison compare_pde_asymptotics(const Torus& T, const ReflectionFn& r, const SpinField& initial, double t,
                                      const std::vector<double>& kappas, const PdeControls& controls = {});

}  // namespace lltorus
