#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lltorus/elliptic.hpp"
#include "lltorus/matrix2.hpp"
#include "lltorus/scattering.hpp"

namespace lltorus {

// Reflection coefficient on the grid nodes and on the midpoints s_j + h/2.
struct ReflectionSamples {
  std::vector<cplx> nodes, mid;
};
ReflectionSamples sample_reflection(const ContourGrid& grid, const std::function<cplx(cplx)>& r);
// Midpoint values by trigonometric interpolation along each line.
ReflectionSamples interpolate_reflection(const ContourGrid& grid, const std::vector<cplx>& r_nodes);

// Periodic line data shifted by half a grid step (trigonometric interpolation).
std::vector<cplx> half_shift(const std::vector<cplx>& v);

struct MeshDescriptor {
  int n = 0;              // nodes per line
  double h = 0;           // uniform spacing
  double t = 0;
  double max_dp = 0;      // max |p'| over the support of r
  double density = 0;     // nodes per unit length
  double required = 0;    // resolution bound for the requested points per wavelength
};

// Quadrature nodes on Gamma1 (left to right, weight h) and Gamma2 (right to
// left, weight -h).  The + side of both is Omega+.
struct ContourSystem {
  ContourGrid grid;
  std::vector<cplx> weights;
  MeshDescriptor mesh;
  double length() const;  // sum of |weights|
};
ContourSystem make_contour_system(const Torus& T, int n);

// Smallest power-of-two n whose spacing resolves the jump oscillation with
// the given points per wavelength over the set where |r| > support_tol.
// For t > 0 kappa is x/t; at t = 0 it is read as x.
MeshDescriptor resolve_mesh(const Torus& T, const std::function<cplx(cplx)>& r, double t, double kappa,
                            double points_per_wavelength = 3.0, int min_n = 256, double support_tol = 1e-6);

struct Jump {
  double x = 0, t = 0;
  std::vector<ComplexMatrix2> nodes, mid;
};
// G = [[1+|r|^2, conj(r) e^{-i phi}], [r e^{i phi}, 1]] with phi = 2 x w3 at
// t = 0 and phi = 2 t p(lambda, x/t) for t > 0.
Jump build_jump(const Torus& T, const ContourGrid& grid, const ReflectionSamples& r, double x, double t);
ComplexMatrix2 jump_matrix(cplx r, double phase);

enum class SolverMethod { Auto, Dense, Gmres };

struct SolverOptions {
  SolverMethod method = SolverMethod::Auto;
  int dense_max_n = 128;  // Auto uses dense LU up to this many nodes per line
  double gmres_tol = 1e-13;
  int gmres_restart = 20;
  int gmres_max_iter = 400;
  double residual_tol = 1e-9;
};

struct SolveReport {
  SolverMethod method = SolverMethod::Dense;
  double residual = 0;       // max-norm residual of the discrete equation
  int iterations = 0;        // GMRES iterations (both rows), 0 for dense
  double rcond = 0;          // dense only
  double small_norm_K = 0;   // |chi - 1| / |G - 1|
};

// Nystrom solution of chi = 1 + (1/2 pi i) int chi (G - 1) C(mu, lambda_-) dmu
// on a uniform periodic grid.  Holds everything needed to evaluate Phi and Y.
class RHPSolution {
public:
  RHPSolution(const Torus& T, const ContourSystem& cs, const Jump& jump, const SolverOptions& opt = {});

  const std::vector<ComplexMatrix2>& chi() const { return chi_; }
  const std::vector<ComplexMatrix2>& density() const { return F_; }  // chi (G - 1)
  const SolveReport& report() const { return report_; }
  const ContourSystem& contour() const { return cs_; }

  // Off-contour value; on-contour points are accepted only where the density
  // vanishes locally (e.g. the lattice points), else Range with the standoff.
  ComplexMatrix2 phi(cplx lambda) const;
  // Boundary values (+, -) at the midpoints s_j + h/2 of both lines, index j
  // in [0, 2n).
  void midpoint_boundary_values(std::vector<ComplexMatrix2>& plus, std::vector<ComplexMatrix2>& minus) const;
  // max_j |Phi+ - Phi- G| at the midpoints
  double jump_residual() const;

  // Symmetrized solution; throws Singular when |det N| < floor.
  ComplexMatrix2 Y(cplx lambda, double det_floor = 1e-10) const;
  // det of the symmetrized numerator, constant in lambda
  cplx symmetrization_det(cplx lambda) const;

  // Residue of the Cauchy integral at the auxiliary pole K + iK'; it
  // vanishes when the equation is solved.
  ComplexMatrix2 auxiliary_residue() const;

private:
  Torus T_;
  ContourSystem cs_;
  Jump jump_;
  std::vector<ComplexMatrix2> chi_, F_;
  std::vector<cplx> Amu_;  // -zeta(mu_j - iK')
  SolveReport report_;
};

struct LVector {
  double L1 = 0, L2 = 0, L3 = 1;
  double im_residual = 0;  // largest |Im L_j|
};
// Pauli decomposition of Y(0) s3 Y(0)^{-1}.
LVector reconstruct_L(const ComplexMatrix2& Y0, double norm_tol = 1e-8);

// Solve at one (x, t) and reconstruct L.
struct PointResult {
  double x = 0, t = 0;
  LVector L;
  double det_residual = 0, jump_residual = 0;
  SolveReport report;
};
PointResult rhp_point(const Torus& T, const ContourSystem& cs, const ReflectionSamples& r, double x, double t,
                      const SolverOptions& opt = {});

// scattering -> r -> RHP(t = 0) at each x of the field's grid within [-xmax, xmax]
SpinField ist_roundtrip(const Torus& T, const SpinField& field, int n, double xmax, double dx_out,
                        const SolverOptions& opt = {});

}  // namespace lltorus
