#pragma once

#include <vector>

#include "lltorus/elliptic.hpp"

namespace lltorus {

// p(lambda, kappa) = kappa w3 - 2 w1 w2 and its first two lambda-derivatives.
cplx p_exponent(const Torus& T, cplx lambda, double kappa);
cplx dp_dlambda(const Torus& T, cplx lambda, double kappa);
cplx d2p_dlambda2(const Torus& T, cplx lambda, double kappa);

struct StationaryPointResult {
  double lambda0 = 0;
  double p_at = 0;
  double phi0 = 0;
  double residual = 0;
};

// Unique zero of dp on (-2K, 0) for kappa > 0.
StationaryPointResult find_lambda0(const Torus& T, double kappa);
// -p''(lambda0) from the closed form; throws Consistency if not positive.
double phi0(const Torus& T, double lambda0, double kappa);

struct SignChart {
  std::vector<double> re, im;
  std::vector<int> sign;  // row-major, sign[i * re.size() + j] at (re[j], im[i]); 0 near poles or on Im p = 0
  int at(std::size_t i, std::size_t j) const { return sign[i * re.size() + j]; }
};
SignChart im_p_sign_chart(const Torus& T, double kappa, double re_min, double re_max, std::size_t nre, double im_min,
                          double im_max, std::size_t nim);

struct KappaWindow {
  double m = 0, M = 0;
  bool empty() const { return !(m <= M); }
};
// Sub-interval of [lo, hi] (sampled on n points) where lambda0 stays at least
// margin away from -2K and 0.
KappaWindow safe_kappa_window(const Torus& T, double lo, double hi, int n, double margin);

}  // namespace lltorus
