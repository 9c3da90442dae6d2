#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "lltorus/elliptic.hpp"
#include "lltorus/matrix2.hpp"

namespace lltorus {

using Vec3 = Eigen::Vector3d;

// Spin profile L(x) on a uniform grid of [-X, X].  Between samples L is
// interpolated with cubic B-splines unless an exact profile is attached.
class SpinField {
public:
  SpinField() = default;
  static SpinField from_samples(std::vector<double> x, std::vector<Vec3> L);
  static SpinField from_function(const std::function<Vec3(double)>& f, double X, std::size_t n);

  const std::vector<double>& x() const { return x_; }
  const std::vector<Vec3>& L() const { return L_; }
  double X() const { return x_.back(); }
  double dx() const { return x_[1] - x_[0]; }
  Vec3 at(double x) const;

  // Unit norm at every sample and (0,0,1) tails; throws Domain otherwise.
  void validate(const Tolerances& tol = default_tolerances()) const;

private:
  struct Splines;
  std::vector<double> x_;
  std::vector<Vec3> L_;
  std::function<Vec3(double)> exact_;
  std::shared_ptr<const Splines> splines_;
};

// L1 = A exp(-(x/w)^2), L2 = 0, L3 = sqrt(1 - L1^2).
SpinField gaussian_bump(double amplitude, double width, double X, std::size_t n);

// U(lambda, x) = -i sum_j s_j L_j w_j(lambda)
ComplexMatrix2 lax_U(const WTriple& w, const Vec3& L);

enum class JostSide { Plus, Minus };

// Upsilon_{+/-}(lambda, x) = F_{+/-} exp(i x w3 s3) at each requested x.
// Minus integrates upward from -X, Plus downward from +X; xs in any order.
std::vector<ComplexMatrix2> jost_solve(const Torus& T, cplx lambda, const SpinField& field, JostSide side,
                                       const std::vector<double>& xs);

struct Coefficients {
  cplx a, b;
};
// a = det(v+^(1), v-^(2)), b = exp(-2 i w3 x) det(v-^(1), v+^(1)) at x = x_eval.
Coefficients scattering_coeffs(const Torus& T, cplx lambda, const SpinField& field, double x_eval = 0.0);

// Uniform contour grid: n nodes per line, s_j = -2K + (j + 1/2) h with h = 4K/n
// on Gamma1, and s_j + 2iK' on Gamma2.  n even puts 0 and 2K at midpoints.
struct ContourGrid {
  int n = 0;
  double h = 0;
  double K = 0, Kp = 0;
  std::vector<cplx> nodes;  // Gamma1 nodes then Gamma2 nodes
  static ContourGrid make(const Torus& T, int n);
  double s(int j) const { return -2.0 * K + (j + 0.5) * h; }
};

struct ScatteringData {
  ContourGrid grid;
  std::vector<cplx> a, b, r;
  bool soliton_free = true;
  int winding = 0;
  double t = 0;
};

ScatteringData compute_scattering(const Torus& T, const SpinField& field, int n);

// Winding number of a around the boundary of Omega+ from its grid values on
// Gamma1 (left to right) and Gamma2 (right to left).
int winding_number(const ScatteringData& d);
// Fills r = b/a, the winding number and soliton_free; throws SolitonPresent
// on nonzero winding.
void reflection(ScatteringData& d);

ScatteringData evolve_scattering(const Torus& T, const ScatteringData& d, double t);

struct DispersionResult {
  std::vector<cplx> a;
  double refinement_change = 0;  // max |a_n - a_{n/2}| over common nodes
  bool converged = true;
};
// Boundary values from Omega+ of a(lambda) on all grid nodes from sampled r.
DispersionResult dispersion_a(const Torus& T, const ContourGrid& grid, const std::vector<cplx>& r, double tol = 1e-8);
// Interior value a(lambda), lambda in Omega+ off the contours.
cplx dispersion_a_interior(const Torus& T, const ContourGrid& grid, const std::vector<cplx>& r, cplx lambda);

// r(lambda) = c (w1/rho)(w3/rho) exp(-(w3/rho)^2 / s^2) on Gamma1 u Gamma2.
// Zero within the guard radius of lattice points.  Construction self-tests
// the shift symmetries on 100 nodes and throws Consistency on violation.
std::function<cplx(cplx)> synthetic_reflection(double c, double s, const Torus& T);

}  // namespace lltorus
