#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lltorus/elliptic.hpp"
#include "lltorus/errors.hpp"
#include "test_support.hpp"

using namespace lltorus;
using testsupport::rel;
using testsupport::torus_points;

namespace {
const cplx I(0.0, 1.0);

template <class F>
cplx fd4(F f, cplx z, cplx h) {
  return (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h);
}
}  // namespace

TEST_CASE("complete elliptic integrals against the AGM oracle") {
  // reference values: arbitrary-precision AGM, frozen
  const auto ce = complete_elliptic(0.5);
  CHECK(ce.K == doctest::Approx(1.685750354812596).epsilon(1e-13));
  CHECK(ce.Kprime == doctest::Approx(2.1565156474996432).epsilon(1e-13));
  CHECK(complete_elliptic(0.3).K == doctest::Approx(1.6080486199305128).epsilon(1e-13));
  CHECK(complete_elliptic(0.8).Kprime == doctest::Approx(1.7507538029157525).epsilon(1e-13));
  CHECK(complete_elliptic(1e-9).K == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK_THROWS_AS(complete_elliptic(0.0), Error);
  CHECK_THROWS_AS(complete_elliptic(1.0), Error);
}

TEST_CASE("anisotropy parameters") {
  const auto p = AnisotropyParams::from_J(-0.3, 0.7, 2.1);
  CHECK(p.rho == doctest::Approx(std::sqrt(2.4) / 2));
  CHECK(p.k == doctest::Approx(std::sqrt(1.0 / 2.4)));
  CHECK(std::abs(p.k * p.k + p.kprime * p.kprime - 1.0) < 1e-14);
  CHECK(std::abs(p.K - complete_elliptic(p.k).K) < 1e-12);
  CHECK_THROWS_AS(AnisotropyParams::from_J(1.0, 1.0, 2.0), Error);
  const auto q = AnisotropyParams::from_modulus(0.5, 1.0);
  CHECK(q.J3 == doctest::Approx(4.0));
  CHECK(q.J2 == doctest::Approx(1.0));
}

TEST_CASE("jacobi functions") {
  const double k = 0.5;
  const auto z0 = jacobi_sn_cn_dn(0.0, k);
  CHECK(std::abs(z0.sn) < 1e-15);
  CHECK(std::abs(z0.cn - 1.0) < 1e-15);
  CHECK(std::abs(z0.dn - 1.0) < 1e-15);

  const double K = complete_elliptic(k).K;
  const auto zk = jacobi_sn_cn_dn(K, k);
  CHECK(std::abs(zk.sn - 1.0) < 1e-14);
  CHECK(std::abs(zk.cn) < 1e-14);
  CHECK(std::abs(zk.dn - std::sqrt(0.75)) < 1e-14);

  // arbitrary-precision reference at 0.7 + 0.4i, frozen
  const auto zc = jacobi_sn_cn_dn(cplx(0.7, 0.4), k);
  CHECK(std::abs(zc.sn - cplx(0.68910790125738116, 0.29821056918708214)) < 1e-13);
  CHECK(std::abs(zc.cn - cplx(0.82248729914865784, -0.24985098210998262)) < 1e-13);
  CHECK(std::abs(zc.dn - cplx(0.95206449517052418, -0.053961485936011163)) < 1e-13);

  const auto p = AnisotropyParams::from_modulus(k);
  for (cplx z : torus_points(p, 100, 11, 0.2)) {
    const auto s = jacobi_sn_cn_dn(z, k);
    CHECK(std::abs(s.sn * s.sn + s.cn * s.cn - 1.0) < 1e-11 * std::max(1.0, std::norm(s.sn)));
    CHECK(std::abs(s.dn * s.dn + k * k * s.sn * s.sn - 1.0) < 1e-11 * std::max(1.0, std::norm(s.sn)));
    const auto t = jacobi_sn_cn_dn(z + 2.0 * K, k);
    CHECK(rel(t.sn, -s.sn) < 1e-11);
    CHECK(rel(t.dn, s.dn) < 1e-11);
  }
}

TEST_CASE("torus point reduction and lattice distance") {
  const auto p = AnisotropyParams::from_modulus(0.5);
  const cplx z(0.3, -0.7);
  const auto a = TorusPoint::reduce(z + 4.0 * p.K, p).lambda;
  const auto b = TorusPoint::reduce(z + cplx(0, 4.0 * p.Kprime), p).lambda;
  CHECK(std::abs(a - z) < 4 * std::numeric_limits<double>::epsilon() * 4 * p.K);
  CHECK(std::abs(b - z) < 4 * std::numeric_limits<double>::epsilon() * 4 * p.Kprime);
  const auto d = distance_to_lattice(cplx(2 * p.K - 0.01, 2 * p.Kprime + 0.02), p);
  CHECK(d.distance == doctest::Approx(std::hypot(0.01, 0.02)));
  CHECK(std::abs(d.nearest - cplx(2 * p.K, 2 * p.Kprime)) < 1e-14);
}

TEST_CASE("w functions: curve, symmetries, derivatives") {
  for (double k : {0.3, 0.5, 0.8}) {
    const auto p = AnisotropyParams::from_J(0.2, 0.2 + k * k * 3.0, 3.2);
    const Torus T(p);
    const double rho = p.rho;
    const cplx s2K(2 * p.K, 0), s2iK(0, 2 * p.Kprime);
    for (cplx z : torus_points(p, 100, 7, 0.1)) {
      const auto w = T.w(z);
      const double scale = std::max({1.0, std::norm(w.w1), std::norm(w.w3)});
      CHECK(std::abs(w.w1 * w.w1 - w.w3 * w.w3 + (p.J1 - p.J3) / 4) < 1e-10 * scale);
      CHECK(std::abs(w.w1 * w.w1 - w.w2 * w.w2 + (p.J1 - p.J2) / 4) < 1e-10 * scale);
      CHECK(std::abs(w.w2 * w.w2 - w.w3 * w.w3 + (p.J2 - p.J3) / 4) < 1e-10 * scale);

      const auto a = T.w(z + s2K), b = T.w(z + s2iK), c = T.w(z + s2K + s2iK);
      CHECK(rel(a.w1, -w.w1) < 1e-11);
      CHECK(rel(a.w2, -w.w2) < 1e-11);
      CHECK(rel(a.w3, w.w3) < 1e-11);
      CHECK(rel(b.w1, w.w1) < 1e-11);
      CHECK(rel(b.w2, -w.w2) < 1e-11);
      CHECK(rel(b.w3, -w.w3) < 1e-11);
      CHECK(rel(c.w1, -w.w1) < 1e-11);
      CHECK(rel(c.w2, w.w2) < 1e-11);
      CHECK(rel(c.w3, -w.w3) < 1e-11);

      const auto m = T.w(-z);
      CHECK(rel(m.w1, -w.w1) < 1e-11);
      CHECK(rel(m.w2, -w.w2) < 1e-11);
      CHECK(rel(m.w3, -w.w3) < 1e-11);
      const auto cj = T.w(std::conj(z));
      CHECK(rel(cj.w3, std::conj(w.w3)) < 1e-11);
      CHECK(rel(cj.w1, std::conj(w.w1)) < 1e-11);

      const double dist = distance_to_lattice(z, p).distance;
      const cplx h = 0.01 * std::min(1.0, dist);
      const cplx d1 = fd4([&](cplx u) { return T.w(u).w1; }, z, h);
      const cplx d2 = fd4([&](cplx u) { return T.w(u).w2; }, z, h);
      const cplx d3 = fd4([&](cplx u) { return T.w(u).w3; }, z, h);
      CHECK(std::abs(d1 + w.w2 * w.w3 / rho) < 1e-7 * std::abs(w.w2 * w.w3 / rho) + 1e-9);
      CHECK(std::abs(d2 + w.w1 * w.w3 / rho) < 1e-7 * std::abs(w.w1 * w.w3 / rho) + 1e-9);
      CHECK(std::abs(d3 + w.w1 * w.w2 / rho) < 1e-7 * std::abs(w.w1 * w.w2 / rho) + 1e-9);
    }
  }
}

TEST_CASE("w functions: residue, special values, pole guard") {
  const auto p = AnisotropyParams::from_J(0.0, 1.5, 6.0);
  const Torus T(p);
  const cplx z(1e-6, 2e-6);
  CHECK(std::abs(z * T.w(z).w3 - p.rho) < 1e-10);
  CHECK(std::abs(z * T.w(z).w1 - p.rho) < 1e-10);
  // rho-scaled special values at K
  const auto wk = T.w(p.K);
  CHECK(std::abs(wk.w1 - p.rho) < 1e-13);
  CHECK(std::abs(wk.w2 - p.rho * p.kprime) < 1e-13);
  CHECK(std::abs(wk.w3) < 1e-13);
  // with rho = 1 the unscaled statement w1(K) = 1, w2(K) = k'
  const Torus T1(AnisotropyParams::from_modulus(0.5, 1.0));
  CHECK(std::abs(T1.w(T1.K()).w1 - 1.0) < 1e-13);
  CHECK(std::abs(T1.w(T1.K()).w2 - std::sqrt(0.75)) < 1e-13);

  try {
    T.w(cplx(2 * p.K, 2 * p.Kprime) + 1e-10);
    FAIL("expected pole error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleProximity);
    CHECK(e.context().size() == 2);
  }
}

TEST_CASE("Im w3 sign on the two halves of the torus") {
  const auto p = AnisotropyParams::from_modulus(0.5);
  const Torus T(p);
  int checked = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double x = -2 * p.K + 4 * p.K * (i + 0.5) / 50;
      const double y = 2 * p.Kprime * j / 49.0;
      for (double sgn : {1.0, -1.0}) {
        const cplx z(x, sgn * y);
        if (distance_to_lattice(z, p).distance < 1e-3) continue;
        const cplx w3 = T.w(z).w3;
        CHECK(sgn * w3.imag() <= 1e-12 * std::abs(w3) + 1e-14);
        ++checked;
      }
    }
  CHECK(checked > 4900);
}

TEST_CASE("Weierstrass zeta and sigma") {
  const auto p = AnisotropyParams::from_modulus(0.5);
  const Torus T(p);
  // arbitrary-precision theta-series reference, frozen
  CHECK(std::abs(T.eta1() - 0.24205391784937307) < 1e-14);
  CHECK(std::abs(T.zeta(cplx(0.9, 0.6)) - cplx(0.76953174350298099, -0.51422663875821543)) < 1e-13);
  CHECK(std::abs(T.sigma(cplx(0.9, 0.6)) - cplx(0.90041217243760873, 0.59992073171663479)) < 1e-13);
  CHECK(std::abs(T.eta3() - cplx(0.0, -0.15625392055513742)) < 1e-14);

  const cplx s2K(2 * p.K, 0), s2iK(0, 2 * p.Kprime);
  CHECK(std::abs(T.zeta(s2K) - T.eta1()) < 1e-13);
  CHECK(std::abs(T.zeta(s2iK) - T.eta3()) < 1e-13);
  CHECK(std::abs(T.zeta(s2K) + T.zeta(s2iK) - T.zeta(s2K + s2iK)) < 1e-12);
  CHECK(std::abs(T.sigma(cplx(1e-7, 1e-7)) / cplx(1e-7, 1e-7) - 1.0) < 1e-12);

  for (cplx z : torus_points(p, 60, 3, 0.1)) {
    CHECK(rel(T.zeta(-z), -T.zeta(z)) < 1e-12);
    CHECK(rel(T.zeta(z + 2.0 * s2K) - T.zeta(z), 2.0 * T.zeta(s2K)) < 1e-10);
    CHECK(rel(T.zeta(z + 2.0 * s2iK) - T.zeta(z), 2.0 * T.zeta(s2iK)) < 1e-10);
    CHECK(rel(T.zeta(z + 2.0 * (s2K + s2iK)) - T.zeta(z), 2.0 * T.zeta(s2K + s2iK)) < 1e-10);
    const cplx h = 1e-3;
    const cplx dlog = fd4([&](cplx u) { return std::log(T.sigma(u) / T.sigma(z)); }, z, h);
    CHECK(rel(dlog, T.zeta(z)) < 1e-7);
    CHECK(std::abs(T.zeta_periodic(z + s2K * 2.0) - T.zeta_periodic(z)) < 1e-11);
  }
  CHECK_THROWS_AS(weierstrass_zeta(s2K * 2.0, T), Error);
}

TEST_CASE("w_j in terms of zeta") {
  for (double k : {0.3, 0.5, 0.8}) {
    const auto p = AnisotropyParams::from_modulus(k, 0.7);
    const Torus T(p);
    const double rho = p.rho;
    const cplx s2K(2 * p.K, 0), s2iK(0, 2 * p.Kprime);
    const cplx zK = T.zeta(s2K), ziK = T.zeta(s2iK), zKiK = T.zeta(s2K + s2iK);
    for (cplx z : torus_points(p, 60, 5, 0.1)) {
      const cplx a = T.zeta(z), b = T.zeta(z + s2K), c = T.zeta(z + s2K + s2iK), d = T.zeta(z + s2iK);
      const auto w = T.w(z);
      CHECK(rel(rho * (a - b - c + d + zK + zKiK - ziK), w.w1) < 1e-9);
      CHECK(rel(rho * (a - b + c - d + zK - zKiK + ziK), w.w2) < 1e-9);
      CHECK(rel(rho * (a + b - c - d - zK + zKiK + ziK), w.w3) < 1e-9);
      CHECK(rel(a - b + zK, (w.w1 + w.w2) / (2 * rho)) < 1e-9);
      CHECK(rel(a - d + ziK, (w.w2 + w.w3) / (2 * rho)) < 1e-9);
      CHECK(rel(a - c + zKiK, (w.w1 + w.w3) / (2 * rho)) < 1e-9);
    }
  }
}

TEST_CASE("beta function") {
  const auto p = AnisotropyParams::from_modulus(0.5);
  const Torus T(p);
  // beta0 from an arbitrary-precision sigma, frozen; note the nonzero imaginary part
  CHECK(std::abs(T.beta0() - cplx(-0.11014865132708119, -0.064066877248900249)) < 1e-13);
  const cplx lam = 1e-6;
  CHECK(std::abs(T.beta(lam) / lam - T.beta0()) < 1e-4 * std::abs(T.beta0()));

  for (double x : {-3.0, -2.1, -1.0, -0.4}) {
    const cplx z(x, 0.0);
    const cplx d = fd4([&](cplx u) { return std::log(T.beta(u) / T.beta(z)); }, z, cplx(1e-3));
    CHECK(std::abs(d - T.w(z).w3 / p.rho) < 1e-7 * std::max(1.0, std::abs(d)));
  }
  for (cplx z : torus_points(p, 30, 9, 0.2)) {
    const cplx d = fd4([&](cplx u) { return std::log(T.beta(u) / T.beta(z)); }, z, cplx(1e-3));
    CHECK(rel(d, T.w(z).w3 / p.rho) < 1e-7);
  }
  // continued logarithm on the real segment
  for (double z : {0.01, 0.5, 1.7, 3.0}) {
    const cplx diff = T.log_beta_real(z) - std::log(T.beta(z));
    CHECK(std::abs(diff.real()) < 1e-10);
    const double wrapped = std::remainder(diff.imag(), 2 * std::numbers::pi);
    CHECK(std::abs(wrapped) < 1e-10);
  }
}

TEST_CASE("Gusman-Rodin kernel") {
  const auto p = AnisotropyParams::from_modulus(0.5);
  const Torus T(p);
  const cplx iK(0, p.Kprime), KiK(p.K, p.Kprime);
  auto loop = [&](cplx centre, cplx lambda) {
    const int n = 64;
    const double eps = 0.1;
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = 2 * std::numbers::pi * j / n;
      const cplx e = std::exp(I * t);
      s += T.kernel(centre + eps * e, lambda) * (I * eps * e);
    }
    return s * (2 * std::numbers::pi / n) / (2.0 * std::numbers::pi * I);
  };
  for (cplx lam : torus_points(p, 10, 21, 0.3)) {
    if (std::abs(lam - iK) < 0.3 || std::abs(TorusPoint::reduce(lam - KiK, p).lambda) < 0.3) continue;
    CHECK(std::abs(loop(lam, lam) - 1.0) < 1e-8);
    CHECK(std::abs(loop(iK, lam) + 1.0) < 1e-8);
    CHECK(std::abs(T.kernel(lam, iK)) < 1e-12);
    CHECK(std::abs(T.kernel(KiK, lam)) < 1e-12);
    const cplx mu = lam + cplx(0.37, -0.21);
    const cplx c = T.kernel(mu, lam);
    CHECK(rel(T.kernel(mu + 4 * p.K, lam), c) < 1e-10);
    CHECK(rel(T.kernel(mu, lam + 4 * p.K), c) < 1e-10);
    CHECK(rel(T.kernel(mu + cplx(0, 4 * p.Kprime), lam), c) < 1e-10);
    CHECK(rel(T.kernel(mu, lam + cplx(0, 4 * p.Kprime)), c) < 1e-10);
  }
  CHECK_THROWS_AS(T.kernel(0.3, 0.3), Error);
  CHECK_THROWS_AS(T.kernel(iK, 0.3), Error);
  CHECK_THROWS_AS(T.kernel(0.3, KiK), Error);
}

TEST_CASE("f(mu) combinations reproduce w1 and w2") {
  const auto p = AnisotropyParams::from_modulus(0.5);
  const Torus T(p);
  const cplx s2K(2 * p.K, 0), s2iK(0, 2 * p.Kprime);
  for (double l0 : {-1.96, -2.7, -0.8}) {
    const cplx a = T.f_sum(l0), b = T.f_sum(l0 + s2K), c = T.f_sum(l0 + s2iK), d = T.f_sum(l0 + s2K + s2iK);
    const auto w = T.w(l0);
    CHECK(std::abs(a - b + c - d - 4.0 * w.w1 / p.rho) < 1e-9);
    CHECK(std::abs(a - b - c + d - 4.0 * w.w2 / p.rho) < 1e-9);
    CHECK(rel(T.f_sum(l0 + 4 * p.K), a) < 1e-10);
  }
}
