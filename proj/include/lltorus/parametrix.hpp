#pragma once

#include "lltorus/asymptotics.hpp"
#include "lltorus/elliptic.hpp"
#include "lltorus/matrix2.hpp"

namespace lltorus {

// Gamma and its reciprocal (entire, zero at the poles of Gamma).
cplx gamma_fn(cplx z);
cplx rgamma(cplx z);

// Ring radii of the three representations of D_order(z).
struct PcfRings {
  double series = 4.0;      // Maclaurin for |z| <= series
  double asymptotic = 12.0; // asymptotic expansion for |z| >= asymptotic
};

// Parabolic cylinder function D_order(z).  Throws Overflow when |Re z^2|/4
// exceeds the exponent cap.
cplx pcf_D(cplx order, cplx z);
// d/dz D_order(z) = z D_order(z)/2 - D_{order+1}(z)
cplx pcf_Dprime(cplx order, cplx z);

// Individual representations, exposed for the switchover checks.
cplx pcf_D_series(cplx order, cplx z);
cplx pcf_D_asymptotic(cplx order, cplx z);
cplx pcf_D_bridge(cplx order, cplx z);

struct ParabolicParams {
  cplx a, b;
  double nu = 0;
  cplx r0;
  double p0 = 0;
  double t = 0;
};
// a, b from -i sqrt(2pi) e^{-2pi nu}/(a Gamma(-i nu)) = -r0 e^{2itp0} and
// -sqrt(2pi) e^{3pi nu}/(b Gamma(i nu)) = -conj(r0) e^{-2itp0}.  Range at r0 = 0.
ParabolicParams make_parabolic_params(cplx r0, double p0, double t);

// Sector index 0..4 of the table for arg xi in (pi/4, 9pi/4); Domain on a ray.
int dab_sector(cplx xi, double ray_tol = 1e-14);
// D_{a,b}(xi) on the given sector's formula (entire in xi).
ComplexMatrix2 Dab_sector(cplx xi, const ParabolicParams& P, int sector);
ComplexMatrix2 Dab_matrix(cplx xi, const ParabolicParams& P);
// m1, m2 of the expansion at infinity
ComplexMatrix2 dab_m1(const ParabolicParams& P);
// m2 = diag(ab(ab - 1)/2, -ab(ab + 1)/2), the second entry fixed by the
// third-order balance of the ODE
ComplexMatrix2 dab_m2(const ParabolicParams& P);
// the same with the second entry as printed, +ab(ab + 1)/2
ComplexMatrix2 dab_m2_printed(const ParabolicParams& P);
// D_ab(xi) e^{-xi^2 s3/4} xi^{-ab s3} - 1 - m1/xi - m2/xi^2
ComplexMatrix2 dab_expansion_remainder(cplx xi, const ParabolicParams& P, const ComplexMatrix2& m2);
// m1 and m2 read off D_ab along the ray arg xi = theta by Richardson
// extrapolation between |xi| = R and 2R
struct ExpansionCoefficients {
  ComplexMatrix2 m1, m2;
};
ExpansionCoefficients dab_expansion_numeric(const ParabolicParams& P, double theta, double R = 15.0);
// arg xi taken in (pi/4, 9pi/4]
double dab_arg(cplx xi);
// xi^{s} with arg xi in (pi/4, 9pi/4]
cplx dab_power(cplx xi, cplx s);

// Constant jump S_k^{-1} S_{k+1} across the ray between sectors k and k+1
// (k = 4 closes the cycle back onto sector 0 across arg = pi/4).
ComplexMatrix2 dab_ray_jump(const ParabolicParams& P, int k, double radius = 1.0);
// Triangular and diagonal matrices the ray jumps should equal, written with
// E1 = -r0 e^{2itp0}, E2 = -conj(r0) e^{-2itp0} and q = 1 + |r0|^2.
ComplexMatrix2 dab_expected_jump(const ParabolicParams& P, int k);

// xi = sqrt(4it(p(lambda0) - p(lambda))) on the root closest to
// gamma sqrt(t)(lambda - lambda0), gamma = e^{i pi/4} sqrt(2 phi0); lambda is
// reduced by multiples of 2K towards lambda0.  Range when the two roots are
// not clearly separated by the linearization.
cplx xi_map(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in);
cplx xi_tilde(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in);
cplx xi_gamma(const AsymptoticInputs& in);

double disc_radius(double t, double epsilon);
// Disc index 0..3 (lambda0, +2K, +2iK', +2K+2iK') containing lambda, else -1.
int local_disc(const Torus& T, cplx lambda, double lambda0, double radius);

// Local parametrix assembled from D_{a,b} with the sigma_j conjugations of
// the four discs; Domain outside all discs.
ComplexMatrix2 local_parametrix(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in,
                                const ReflectionFn& r, double radius);
// T_gl(lambda) = alpha(lambda)^{sigma3}
ComplexMatrix2 global_parametrix(const Torus& T, cplx lambda, const AsymptoticInputs& in, const ReflectionFn& r);

// G_R = T_gl T_loc^{-1} at a point of the lambda0 circle, with the two
// candidate leading terms 1 -+ (1/xi) alpha^{s3} xi^{-i nu s3} m1 xi^{i nu s3} alpha^{-s3}.
struct GRSample {
  cplx lambda, xi;
  ComplexMatrix2 G;
  ComplexMatrix2 minus_m1;   // leading term of the inverse expansion
  ComplexMatrix2 plus_m1;    // leading term with the opposite sign
  ComplexMatrix2 printed;    // 1 + (1/xi) [[0, -a g e^{2ic0}], [b g^{-1} e^{-2ic0}, 0]]
  ComplexMatrix2 corrected;  // the same with the 1/xi term negated
};
GRSample gr_sample(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in, const ReflectionFn& r,
                   double radius);

struct GRCircle {
  double radius = 0, t = 0;
  double err_minus = 0;      // sup |G_R - (1 - m1/xi)|
  double err_plus = 0;       // sup |G_R - (1 + m1/xi)|
  double err_printed = 0;    // sup |G_R - printed leading term|
  double err_corrected = 0;  // sup |G_R - corrected leading term|
  double printed_vs_plus = 0;  // sup |printed - (1 + m1/xi)|, the two agree to O(lambda - lambda0)/xi
  double matching = 0;       // sup |T_loc T_gl^{-1} - 1|
};
GRCircle gr_circle(const Torus& T, double t, const AsymptoticInputs& in, const ReflectionFn& r, double radius,
                   int samples = 64);

}  // namespace lltorus
