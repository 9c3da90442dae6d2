#include "lltorus/spectral.hpp"

#include <cmath>

#include "lltorus/errors.hpp"

namespace lltorus {

cplx p_exponent(const Torus& T, cplx lambda, double kappa) {
  const auto w = T.w(lambda);
  return kappa * w.w3 - 2.0 * w.w1 * w.w2;
}

cplx dp_dlambda(const Torus& T, cplx lambda, double kappa) {
  const auto w = T.w(lambda);
  return (2.0 * w.w3 * (w.w1 * w.w1 + w.w2 * w.w2) - kappa * w.w1 * w.w2) / T.rho();
}

cplx d2p_dlambda2(const Torus& T, cplx lambda, double kappa) {
  const auto w = T.w(lambda);
  const double r2 = T.rho() * T.rho();
  return -(8.0 * w.w1 * w.w2 * w.w3 * w.w3 + (w.w1 * w.w1 + w.w2 * w.w2) * (2.0 * w.w1 * w.w2 - kappa * w.w3)) / r2;
}

double phi0(const Torus& T, double lambda0, double kappa) {
  const double v = -d2p_dlambda2(T, lambda0, kappa).real();
  if (!(v > 0.0))
    throw Error(ErrorKind::Consistency, "spectral", "phi0 not positive; lambda0 is not a maximum of p")
        .with("lambda0", lambda0)
        .with("kappa", kappa)
        .with("phi0", v);
  return v;
}

StationaryPointResult find_lambda0(const Torus& T, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::Domain, "spectral", "kappa must be positive").with("kappa", kappa);
  const double K = T.K();
  const double delta = 1e-6 * K;
  double a = -2.0 * K + delta, b = -delta;
  auto f = [&](double x) { return dp_dlambda(T, x, kappa).real(); };
  double fa = f(a), fb = f(b);
  // dp -> +inf at -2K+ and -inf at 0-
  if (!(fa > 0.0))
    throw Error(ErrorKind::Range, "spectral", "stationary point pushed onto the endpoint -2K")
        .with("kappa", kappa)
        .with("endpoint", -2.0 * K);
  if (!(fb < 0.0))
    throw Error(ErrorKind::Range, "spectral", "stationary point pushed onto the endpoint 0")
        .with("kappa", kappa)
        .with("endpoint", 0.0);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm > 0.0) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 2; ++it) {
    const double step = f(x) / d2p_dlambda2(T, x, kappa).real();
    if (std::isfinite(step) && std::abs(step) < 1e-6) x -= step;
  }
  const double guard = 10.0 * delta;
  if (x < -2.0 * K + guard || x > -guard)
    throw Error(ErrorKind::Range, "spectral", "stationary point within guard distance of an endpoint")
        .with("kappa", kappa)
        .with("lambda0", x)
        .with("endpoint", x < -K ? -2.0 * K : 0.0);
  StationaryPointResult r;
  r.lambda0 = x;
  r.p_at = p_exponent(T, x, kappa).real();
  r.residual = std::abs(f(x));
  r.phi0 = phi0(T, x, kappa);
  return r;
}

SignChart im_p_sign_chart(const Torus& T, double kappa, double re_min, double re_max, std::size_t nre, double im_min,
                          double im_max, std::size_t nim) {
  SignChart c;
  auto axis = [](double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
    return v;
  };
  c.re = axis(re_min, re_max, nre);
  c.im = axis(im_min, im_max, nim);
  c.sign.assign(nre * nim, 0);
  const double guard = T.tolerances().guard_radius;
  for (std::size_t i = 0; i < nim; ++i)
    for (std::size_t j = 0; j < nre; ++j) {
      const cplx z(c.re[j], c.im[i]);
      if (distance_to_lattice(z, T.params()).distance < guard) continue;
      const cplx pv = p_exponent(T, z, kappa);
      const double floor = 1e-12 * std::max(1.0, std::abs(pv));
      c.sign[i * nre + j] = pv.imag() > floor ? 1 : (pv.imag() < -floor ? -1 : 0);
    }
  return c;
}

KappaWindow safe_kappa_window(const Torus& T, double lo, double hi, int n, double margin) {
  KappaWindow w{hi, lo};
  for (int i = 0; i < n; ++i) {
    const double kappa = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    try {
      const auto r = find_lambda0(T, kappa);
      if (r.lambda0 > -2.0 * T.K() + margin && r.lambda0 < -margin) {
        w.m = std::min(w.m, kappa);
        w.M = std::max(w.M, kappa);
      }
    } catch (const Error&) {
    }
  }
  return w;
}

}  // namespace lltorus
