#include "lltorus/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace lltorus {

namespace {
const cplx I(0.0, 1.0);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

cplx fd4(const std::function<cplx(cplx)>& f, cplx z, cplx h) {
  return (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h);
}
}  // namespace

std::vector<cplx> random_torus_points(const AnisotropyParams& p, int n, unsigned seed, double margin) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(-2.0 * p.K, 2.0 * p.K), uy(-2.0 * p.Kprime, 2.0 * p.Kprime);
  std::vector<cplx> out;
  while (int(out.size()) < n) {
    const cplx z(ux(gen), uy(gen));
    if (distance_to_lattice(z, p).distance > margin) out.push_back(z);
  }
  return out;
}

cplx kernel_loop(const Torus& T, cplx centre, cplx lambda, double radius, int samples) {
  cplx s = 0.0;
  for (int j = 0; j < samples; ++j) {
    const cplx e = std::exp(I * (2.0 * std::numbers::pi * j / samples));
    s += T.kernel(centre + radius * e, lambda) * (I * radius * e);
  }
  return s / (I * double(samples));
}

std::vector<IdentityCheck> elliptic_identity_suite(const Torus& T, const std::vector<cplx>& points, double tol,
                                                   double derivative_tol) {
  const AnisotropyParams& p = T.params();
  const double rho = p.rho;
  const cplx s2K(2 * p.K, 0), s2iK(0, 2 * p.Kprime);
  const cplx zK = T.zeta(s2K), ziK = T.zeta(s2iK), zKiK = T.zeta(s2K + s2iK);
  std::vector<IdentityCheck> out{
      {"elliptic_curve", 0, tol},    {"shift_w1", 0, tol},       {"shift_w2", 0, tol},
      {"shift_w3", 0, tol},          {"odd", 0, tol},            {"conjugation", 0, tol},
      {"derivatives", 0, derivative_tol}, {"w_via_zeta", 0, tol}, {"zeta_shift_2K", 0, tol},
      {"zeta_shift_2iKp", 0, tol},   {"zeta_shift_2K_2iKp", 0, tol}, {"zeta_half_periods", 0, tol},
      {"kernel_periods", 0, tol}};
  auto bump = [&](int i, double r) { out[i].residual = std::max(out[i].residual, r); };
  bump(11, rel(zK + ziK, zKiK));
  for (cplx z : points) {
    const WTriple w = T.w(z);
    const double scale = std::max({1.0, std::norm(w.w1), std::norm(w.w2), std::norm(w.w3)});
    bump(0, std::abs(w.w1 * w.w1 - w.w3 * w.w3 + (p.J1 - p.J3) / 4) / scale);
    bump(0, std::abs(w.w1 * w.w1 - w.w2 * w.w2 + (p.J1 - p.J2) / 4) / scale);
    bump(0, std::abs(w.w2 * w.w2 - w.w3 * w.w3 + (p.J2 - p.J3) / 4) / scale);

    const WTriple a = T.w(z + s2K), b = T.w(z + s2iK), c = T.w(z + s2K + s2iK);
    bump(1, std::max({rel(a.w1, -w.w1), rel(b.w1, w.w1), rel(c.w1, -w.w1)}));
    bump(2, std::max({rel(a.w2, -w.w2), rel(b.w2, -w.w2), rel(c.w2, w.w2)}));
    bump(3, std::max({rel(a.w3, w.w3), rel(b.w3, -w.w3), rel(c.w3, -w.w3)}));
    const WTriple m = T.w(-z), cj = T.w(std::conj(z));
    bump(4, std::max({rel(m.w1, -w.w1), rel(m.w2, -w.w2), rel(m.w3, -w.w3)}));
    bump(5, std::max({rel(cj.w1, std::conj(w.w1)), rel(cj.w2, std::conj(w.w2)), rel(cj.w3, std::conj(w.w3))}));

    const cplx h = 0.01 * std::min(1.0, distance_to_lattice(z, p).distance);
    const cplx d1 = fd4([&](cplx u) { return T.w(u).w1; }, z, h);
    const cplx d2 = fd4([&](cplx u) { return T.w(u).w2; }, z, h);
    const cplx d3 = fd4([&](cplx u) { return T.w(u).w3; }, z, h);
    bump(6, std::max({rel(d1, -w.w2 * w.w3 / rho), rel(d2, -w.w1 * w.w3 / rho), rel(d3, -w.w1 * w.w2 / rho)}));

    const cplx za = T.zeta(z), zb = T.zeta(z + s2K), zc = T.zeta(z + s2K + s2iK), zd = T.zeta(z + s2iK);
    bump(7, std::max({rel(rho * (za - zb - zc + zd + zK + zKiK - ziK), w.w1),
                      rel(rho * (za - zb + zc - zd + zK - zKiK + ziK), w.w2),
                      rel(rho * (za + zb - zc - zd - zK + zKiK + ziK), w.w3)}));
    bump(8, rel(za - zb + zK, (w.w1 + w.w2) / (2 * rho)));
    bump(9, rel(za - zd + ziK, (w.w2 + w.w3) / (2 * rho)));
    bump(10, rel(za - zc + zKiK, (w.w1 + w.w3) / (2 * rho)));

    // kernel at a nearby generic mu
    const cplx mu = z + cplx(0.37, -0.21);
    const cplx iK(0, p.Kprime), KiK(p.K, p.Kprime);
    if (distance_to_lattice(mu - z, p).distance > 0.05 && std::abs(T.reduce(mu - iK).lambda) > 0.05 &&
        std::abs(T.reduce(z - KiK).lambda) > 0.05) {
      const cplx k0 = T.kernel(mu, z);
      bump(12, std::max({rel(T.kernel(mu + 4 * p.K, z), k0), rel(T.kernel(mu, z + 4 * p.K), k0),
                         rel(T.kernel(mu + cplx(0, 4 * p.Kprime), z), k0),
                         rel(T.kernel(mu, z + cplx(0, 4 * p.Kprime)), k0)}));
    }
  }
  return out;
}

}  // namespace lltorus
