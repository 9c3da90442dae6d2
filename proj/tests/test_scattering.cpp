#include <doctest.h>

#include <numbers>

#include "lltorus/errors.hpp"
#include "lltorus/scattering.hpp"
#include "test_support.hpp"

using namespace lltorus;

namespace {
const cplx I(0.0, 1.0);

struct Setup {
  AnisotropyParams p = AnisotropyParams::from_modulus(0.5);
  Torus T{p};
  SpinField bump = gaussian_bump(0.1, 2.0, 10.0, 2001);
};

double dist(const ComplexMatrix2& a, const ComplexMatrix2& b) { return (a - b).cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("spin field validation and interpolation") {
  Setup s;
  CHECK_NOTHROW(s.bump.validate());
  CHECK(s.bump.at(0.3)[0] == doctest::Approx(0.1 * std::exp(-0.0225)));
  auto sampled = SpinField::from_samples(s.bump.x(), s.bump.L());
  CHECK(std::abs(sampled.at(0.3047)[0] - s.bump.at(0.3047)[0]) < 1e-10);
  auto bad = SpinField::from_function([](double x) { return Vec3(0.5 * std::exp(-x * x / 100), 0, 1); }, 10.0, 101);
  CHECK_THROWS_AS(bad.validate(), Error);
  auto slow = gaussian_bump(0.1, 8.0, 10.0, 101);
  try {
    slow.validate();
    FAIL("tail check should fail");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("Jost solutions for the constant field are the identity") {
  Setup s;
  auto flat = SpinField::from_function([](double) { return Vec3(0, 0, 1); }, 10.0, 101);
  for (cplx lam : {cplx(-1.0, 0), cplx(0.7, 2 * s.p.Kprime), cplx(0.4, 1.0)}) {
    for (auto side : {JostSide::Plus, JostSide::Minus})
      for (const auto& Y : jost_solve(s.T, lam, flat, side, {-3.0, 0.0, 5.0})) CHECK(dist(Y, pauli::id()) < 1e-14);
    const auto c = scattering_coeffs(s.T, lam, flat);
    CHECK(std::abs(c.a - 1.0) < 1e-14);
    CHECK(std::abs(c.b) < 1e-14);
  }
}

TEST_CASE("Jost solutions for a Gaussian bump") {
  Setup s;
  std::vector<double> xs;
  for (int i = 0; i <= 40; ++i) xs.push_back(-10.0 + 0.5 * i);
  for (cplx lam : {cplx(-1.0, 0), cplx(-0.3, 0), cplx(1.2, 2 * s.p.Kprime)}) {
    for (auto side : {JostSide::Plus, JostSide::Minus}) {
      const auto Y = jost_solve(s.T, lam, s.bump, side, xs);
      for (const auto& M : Y) {
        CHECK(std::abs(M.determinant() - 1.0) < 1e-8);
        // conj U(lambda) = s2 U(conj lambda) s2 with conj lambda identified with lambda on the contours
        CHECK(dist(M.conjugate(), conj_by(2, M)) < 1e-8);
      }
      const auto& start = side == JostSide::Plus ? Y.back() : Y.front();
      CHECK(dist(start, pauli::id()) < 1e-10);
    }
    const auto c0 = scattering_coeffs(s.T, lam, s.bump, 0.0);
    const auto c1 = scattering_coeffs(s.T, lam, s.bump, 1.0);
    CHECK(std::abs(c0.a - c1.a) < 1e-7);
    CHECK(std::abs(c0.b - c1.b) < 1e-7);
    CHECK(std::abs(std::norm(c0.a) + std::norm(c0.b) - 1.0) < 1e-6);
    if (lam.real() == -1.0) CHECK(std::abs(c0.b) > 1e-6);
  }
}

TEST_CASE("Jost periodicity under lattice shifts") {
  Setup s;
  const std::vector<double> xs{-2.0, 0.0, 1.5};
  const cplx lam(-1.1, 0.0);
  for (auto side : {JostSide::Plus, JostSide::Minus}) {
    const auto Y = jost_solve(s.T, lam, s.bump, side, xs);
    const auto Y2K = jost_solve(s.T, lam + 2.0 * s.p.K, s.bump, side, xs);
    const auto Y2iK = jost_solve(s.T, lam + cplx(0, 2 * s.p.Kprime), s.bump, side, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(dist(conj_by(3, Y2K[i]), Y[i]) < 1e-7);
      // s1 F(lambda + 2iK') s1 solves the same equation with the same normalization end
      CHECK(dist(conj_by(1, Y2iK[i]), Y[i]) < 1e-7);
    }
  }
}

TEST_CASE("scattering data on the contour grid") {
  Setup s;
  const auto d = compute_scattering(s.T, s.bump, 64);
  const int n = d.grid.n;
  CHECK(d.soliton_free);
  CHECK(d.winding == 0);
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(std::norm(d.a[j]) + std::norm(d.b[j]) - 1.0) < 1e-6);
    const int jj = (j + n / 2) % n;  // lambda + 2K
    CHECK(std::abs(d.a[jj] - d.a[j]) < 1e-6);
    CHECK(std::abs(d.b[jj] + d.b[j]) < 1e-6);
    CHECK(std::abs(d.r[jj] + d.r[j]) < 1e-6);
    CHECK(std::abs(d.a[n + j] - std::conj(d.a[j])) < 1e-6);
    CHECK(std::abs(d.b[n + j] + std::conj(d.b[j])) < 1e-6);
  }
  // nodes adjacent to 0, 2K, 2iK', 2K+2iK'
  for (int j : {n / 2 - 1, n / 2, 0, n - 1}) {
    CHECK(std::abs(d.r[j]) < 1e-8);
    CHECK(std::abs(d.r[n + j]) < 1e-8);
  }
}

TEST_CASE("winding number against the argument principle inside Omega+") {
  Setup s;
  const auto small = gaussian_bump(0.05, 2.0, 10.0, 2001);
  const auto d = compute_scattering(s.T, small, 32);
  CHECK(d.winding == 0);
  // oracle: a evaluated off the contours on an inset rectangle, phase accumulated
  const double K = s.p.K, Kp = s.p.Kprime;
  const double y0 = 0.3 * Kp, y1 = 1.7 * Kp;
  std::vector<cplx> loop;
  const int m = 60;
  for (int j = 0; j < m; ++j) loop.push_back(cplx(-2 * K + 4 * K * j / m, y0));
  for (int j = 0; j < m / 4; ++j) loop.push_back(cplx(2 * K, y0 + (y1 - y0) * j / (m / 4)));
  for (int j = 0; j < m; ++j) loop.push_back(cplx(2 * K - 4 * K * j / m, y1));
  for (int j = 0; j < m / 4; ++j) loop.push_back(cplx(-2 * K, y1 - (y1 - y0) * j / (m / 4)));
  double phase = 0.0;
  cplx prev = scattering_coeffs(s.T, loop[0], small).a;
  for (std::size_t j = 1; j <= loop.size(); ++j) {
    const cplx cur = scattering_coeffs(s.T, loop[j % loop.size()], small).a;
    phase += std::arg(cur / prev);
    prev = cur;
  }
  CHECK(std::abs(phase) < 1e-6);
}

TEST_CASE("time evolution of scattering data") {
  Setup s;
  const auto d = compute_scattering(s.T, s.bump, 32);
  const auto e0 = evolve_scattering(s.T, d, 0.0);
  for (std::size_t j = 0; j < d.b.size(); ++j) CHECK(e0.b[j] == d.b[j]);
  const double t = 3.7;
  const auto e = evolve_scattering(s.T, d, t);
  CHECK(e.t == t);
  for (std::size_t j = 0; j < d.b.size(); ++j) {
    CHECK(e.a[j] == d.a[j]);
    CHECK(std::abs(std::abs(e.b[j]) - std::abs(d.b[j])) < 1e-14);
  }
  // node s_5 = -1.3125 K; w1 w2 = dn/sn^2 there from an arbitrary-precision evaluation, frozen
  const int j = 5;
  const double w1w2 = 1.115085940993010204536437;
  const cplx expect = d.b[j] * std::exp(-4.0 * I * t * w1w2);
  CHECK(std::abs(e.b[j] - expect) < 1e-10);
  CHECK_THROWS_AS(evolve_scattering(s.T, d, -1.0), Error);
}

TEST_CASE("dispersion relation") {
  Setup s;
  const auto grid = ContourGrid::make(s.T, 64);
  const std::vector<cplx> zero(grid.nodes.size(), 0.0);
  const auto a0 = dispersion_a(s.T, grid, zero);
  for (cplx v : a0.a) CHECK(std::abs(v - 1.0) < 1e-15);
  CHECK(std::abs(dispersion_a_interior(s.T, grid, zero, cplx(0.2, 1.0)) - 1.0) < 1e-15);

  // end-to-end: a from the Jost solutions vs a from |r| alone
  const auto d = compute_scattering(s.T, s.bump, 256);
  const auto disp = dispersion_a(s.T, d.grid, d.r);
  CHECK(disp.converged);
  int checked = 0;
  for (std::size_t j = 3; j < d.grid.nodes.size(); j += 26) {
    CHECK(std::abs(disp.a[j] - d.a[j]) < 1e-4 * std::abs(d.a[j]));
    // the deviation from 1 itself, to expose more than the leading digit
    CHECK(std::abs(std::log(disp.a[j]) - std::log(d.a[j])) < 1e-3 * std::abs(std::log(d.a[j])) + 1e-12);
    ++checked;
  }
  CHECK(checked >= 20);
  for (cplx lam : {cplx(-0.9, 0.8), cplx(1.3, 2.5)}) {
    const auto c = scattering_coeffs(s.T, lam, s.bump);
    CHECK(std::abs(dispersion_a_interior(s.T, d.grid, d.r, lam) - c.a) < 1e-6);
  }
}

TEST_CASE("synthetic reflection coefficient") {
  Setup s;
  const auto r = synthetic_reflection(0.5, 1.0, s.T);
  const double K = s.p.K, Kp = s.p.Kprime;
  for (int j = 0; j < 100; ++j) {
    const cplx lam(-2 * K + 4 * K * (j + 0.37) / 100, 0);
    CHECK(std::abs(r(lam + 2 * K) + r(lam)) < 1e-12);
    CHECK(std::abs(r(lam + cplx(0, 2 * Kp)) + std::conj(r(lam))) < 1e-12);
    CHECK(std::abs(r(lam).imag()) < 1e-15);
  }
  CHECK(r(0.0) == cplx(0.0));
  // flatness: finite differences up to order 6 near the lattice points
  const double h = 0.004;
  for (cplx centre : {cplx(0, 0), cplx(2 * K, 0), cplx(0, 2 * Kp), cplx(2 * K, 2 * Kp)}) {
    for (double x0 = -0.05 + 3 * h; x0 <= 0.05 - 3 * h; x0 += 0.01) {
      for (int order = 0; order <= 6; ++order) {
        cplx diff = 0.0;
        double binom = 1.0;
        for (int k = 0; k <= order; ++k) {
          diff += ((order - k) % 2 ? -binom : binom) * r(centre + x0 + (k - order / 2.0) * h);
          binom = binom * (order - k) / (k + 1);
        }
        CHECK(std::abs(diff) / std::pow(h, order) < 1e-8);
      }
    }
  }
  CHECK_THROWS_AS(synthetic_reflection(0.5, 0.0, s.T), Error);
}

TEST_CASE("scattering converges under field-grid refinement") {
  Setup s;
  auto sampled = [&](std::size_t n) {
    const auto f = gaussian_bump(0.1, 2.0, 10.0, n);
    return SpinField::from_samples(f.x(), f.L());
  };
  const cplx lam(-1.0, 0.0);
  const auto c1 = scattering_coeffs(s.T, lam, sampled(201));
  const auto c2 = scattering_coeffs(s.T, lam, sampled(401));
  const auto c3 = scattering_coeffs(s.T, lam, sampled(801));
  const double e1 = std::abs(c1.b - c2.b) + std::abs(c1.a - c2.a);
  const double e2 = std::abs(c2.b - c3.b) + std::abs(c2.a - c3.a);
  CHECK(e2 < e1 / 4.0);
}
