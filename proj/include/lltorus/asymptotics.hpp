#pragma once

#include <functional>

#include "lltorus/elliptic.hpp"

namespace lltorus {

using ReflectionFn = std::function<cplx(cplx)>;

// nu = log(1 + |r0|^2) / 2pi
double nu_of(cplx r0);

// log Gamma(z) from Stirling's series after upward recurrence (reflection for
// Re z < 1/2); continuous branch, Im log Gamma(i nu) is arg Gamma(i nu).
cplx log_gamma_stirling(cplx z);
double arg_gamma_i(double nu);

struct C0Result {
  cplx value;
  double refinement_change = 0;  // |c0(fine) - c0(coarse)|
};
// c0 = (1/2pi) int_{lambda0}^0 d log(1 + |r|^2) log beta(eta - lambda0), with
// the derivative of log(1 + |r|^2) by sixth-order central differences.
C0Result c0_of(const Torus& T, double lambda0, const ReflectionFn& r);
// Same constant after integration by parts:
// -(1/2pi) [ g0 log beta(-lambda0) + int (g - g0) w3(eta - lambda0)/rho deta ].
cplx c0_by_parts(const Torus& T, double lambda0, const ReflectionFn& r);

// log alpha(lambda) = (1/2 pi i) int_{lambda0}^0 log(1 + |r|^2) w3(eta - lambda)/rho deta,
// reduced with alpha(lambda + 2K) = alpha(lambda), alpha(lambda + 2iK') = 1/alpha(lambda).
// Throws Domain on the cut or its translates.
cplx log_alpha_global(const Torus& T, double lambda0, const ReflectionFn& r, cplx lambda);
cplx alpha_global(const Torus& T, double lambda0, const ReflectionFn& r, cplx lambda);
// alpha(0) as an integral of w3(eta), which is regular there because r(0) = 0
cplx alpha_at_zero(const Torus& T, double lambda0, const ReflectionFn& r);
// delta(lambda): the same integral over the whole segment (-2K, 0)
cplx delta_fn(const Torus& T, const ReflectionFn& r, cplx lambda);

struct AsymptoticInputs {
  double kappa = 0;
  double lambda0 = 0, phi0 = 0, p0 = 0;
  cplx r0;
  double nu = 0;
  cplx c0;
  cplx beta0;
  double w1 = 0, w2 = 0, rho = 1;  // w1(lambda0), w2(lambda0)
  double c0_refinement = 0;
};
AsymptoticInputs make_inputs(const Torus& T, double kappa, const ReflectionFn& r);

struct ThetaResult {
  double theta = 0;          // printed phase + pi (matches the RHP numerics)
  double printed = 0;        // phase of the printed leading-order formula
  double im_residual = 0;    // |Im| of the complex phase before taking the real part
};
// Throws Domain when x/t differs from inputs.kappa, and Range at nu = 0
// where arg Gamma(i nu) has no limit.
ThetaResult theta(double x, double t, const AsymptoticInputs& in);

struct AsymptoticL {
  double L1 = 0, L2 = 0, L3 = 1;
  double theta = 0, amplitude = 0;  // amplitude = sqrt(2 nu / (t phi0))
};
AsymptoticL asymptotic_L(double x, double t, const AsymptoticInputs& in);

}  // namespace lltorus
