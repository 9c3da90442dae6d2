#pragma once

#include <string>
#include <vector>

#include "lltorus/elliptic.hpp"

namespace lltorus {

struct IdentityCheck {
  std::string name;
  double residual = 0;   // worst relative residual over the sample points
  double tolerance = 0;
  bool pass() const { return residual < tolerance; }
};

// Uniform points of the fundamental domain at least `margin` from the pole lattice.
std::vector<cplx> random_torus_points(const AnisotropyParams& p, int n, unsigned seed, double margin = 0.05);

// Curve relations, half-period shifts, parity, conjugation, derivatives
// (fourth-order differences), w_j through zeta, the zeta shift identities,
// zeta(2K) + zeta(2iK') = zeta(2K + 2iK') and the periods of the kernel.
std::vector<IdentityCheck> elliptic_identity_suite(const Torus& T, const std::vector<cplx>& points,
                                                   double tol = 1e-9, double derivative_tol = 1e-7);

// (1/2 pi i) of the kernel integrated over a circle of the given radius
// around mu = centre, as a function of mu with lambda fixed.
cplx kernel_loop(const Torus& T, cplx centre, cplx lambda, double radius = 0.1, int samples = 64);

}  // namespace lltorus
