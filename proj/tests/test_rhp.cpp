#include <doctest.h>

#include <numbers>

#include "lltorus/errors.hpp"
#include "lltorus/rhp.hpp"
#include "test_support.hpp"

using namespace lltorus;

namespace {
const cplx I(0.0, 1.0);

struct Setup {
  Torus T{AnisotropyParams::from_modulus(0.5)};
  std::function<cplx(cplx)> r = synthetic_reflection(0.5, 1.0, T);
};

double dist(const ComplexMatrix2& a, const ComplexMatrix2& b) { return (a - b).cwiseAbs().maxCoeff(); }

RHPSolution solve(const Setup& s, int n, double x, double t, const std::function<cplx(cplx)>& r,
                  const SolverOptions& opt = {}) {
  const auto cs = make_contour_system(s.T, n);
  return RHPSolution(s.T, cs, build_jump(s.T, cs.grid, sample_reflection(cs.grid, r), x, t), opt);
}

double max_dev(const std::vector<ComplexMatrix2>& v) {
  double m = 0.0;
  for (const auto& a : v) m = std::max(m, dist(a, pauli::id()));
  return m;
}
}  // namespace

TEST_CASE("half shift is exact on trigonometric polynomials") {
  const int n = 64;
  std::vector<cplx> v(n), expect(n);
  auto f = [](double u) { return std::exp(I * 3.0 * u) + 0.5 * std::cos(7.0 * u) - 0.25 * I * std::sin(2.0 * u); };
  for (int j = 0; j < n; ++j) {
    v[j] = f(2.0 * std::numbers::pi * j / n);
    expect[j] = f(2.0 * std::numbers::pi * (j + 0.5) / n);
  }
  const auto s = half_shift(v);
  for (int j = 0; j < n; ++j) CHECK(std::abs(s[j] - expect[j]) < 1e-13);
}

TEST_CASE("jump matrix algebra and symmetries") {
  Setup s;
  CHECK(dist(jump_matrix(0.0, 1.3), pauli::id()) == 0.0);
  CHECK(std::abs(jump_matrix(cplx(0.3, -0.7), 2.1).determinant() - 1.0) < 1e-14);
  const int n = 128;
  const auto cs = make_contour_system(s.T, n);
  const auto J = build_jump(s.T, cs.grid, sample_reflection(cs.grid, s.r), 1.5, 3.0);
  double e3 = 0.0, e1 = 0.0;
  for (int j = 0; j < n; ++j) {
    // lambda + 2K is node j + n/2; lambda + 2iK' is the Gamma2 node with the same real part
    e3 = std::max(e3, dist(conj_by(3, J.nodes[(j + n / 2) % n]), J.nodes[j]));
    e1 = std::max(e1, dist(conj_by(1, J.nodes[n + j].inverse()), J.nodes[j]));
  }
  CHECK(e3 < 1e-12);
  CHECK(e1 < 1e-12);
  CHECK_THROWS_AS(build_jump(s.T, cs.grid, sample_reflection(cs.grid, s.r), 1.0, -1.0), Error);
}

TEST_CASE("trivial jump gives the identity") {
  Setup s;
  const auto sol = solve(s, 64, 0.7, 0.0, [](cplx) { return cplx(0.0); });
  CHECK(max_dev(sol.chi()) == 0.0);
  CHECK(dist(sol.phi(cplx(0.4, 1.1)), pauli::id()) == 0.0);
  // fully symmetric Phi: numerator 4 Phi, c = 16
  CHECK(std::abs(sol.symmetrization_det(cplx(0.4, 1.1)) - 16.0) < 1e-14);
  CHECK(dist(sol.Y(0.0), pauli::id()) < 1e-15);
}

TEST_CASE("dense and GMRES solves agree and satisfy the discrete equation") {
  Setup s;
  SolverOptions dense, gmres;
  dense.method = SolverMethod::Dense;
  gmres.method = SolverMethod::Gmres;
  const auto a = solve(s, 128, 1.0, 0.0, s.r, dense);
  const auto b = solve(s, 128, 1.0, 0.0, s.r, gmres);
  CHECK(a.report().residual < 1e-9);
  CHECK(b.report().residual < 1e-9);
  CHECK(a.report().rcond > 1e-3);
  CHECK(b.report().iterations > 0);
  double d = 0.0;
  for (std::size_t j = 0; j < a.chi().size(); ++j) d = std::max(d, dist(a.chi()[j], b.chi()[j]));
  CHECK(d < 1e-10);
}

TEST_CASE("small-norm linearity probe") {
  Setup s;
  const auto half = synthetic_reflection(0.25, 1.0, s.T);
  const auto a = solve(s, 256, 0.0, 0.0, s.r);
  const auto b = solve(s, 256, 0.0, 0.0, half);
  const double ratio = max_dev(a.chi()) / max_dev(b.chi());
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
  CHECK(a.report().small_norm_K > 0.0);
}

TEST_CASE("Phi normalization, jump and the auxiliary point") {
  Setup s;
  const auto sol = solve(s, 512, 1.0, 0.0, s.r);
  CHECK(dist(sol.phi(cplx(0.0, s.T.Kp())), pauli::id()) < 1e-8);
  CHECK(sol.jump_residual() < 1e-6);
  CHECK(max_abs(sol.auxiliary_residue()) < 1e-9);
  const cplx P(s.T.K(), s.T.Kp());
  const auto near = sol.phi(P + 1e-6 * std::exp(I * 0.3));
  const auto far = sol.phi(P + 1e-2 * std::exp(I * 0.3));
  CHECK(max_abs(near) < 10.0);
  CHECK(dist(near, far) < 1e-2);
}

TEST_CASE("boundary values agree with the limit from the plus side") {
  Setup s;
  const int n = 1024;
  const auto sol = solve(s, n, 0.5, 0.0, s.r);
  std::vector<ComplexMatrix2> plus, minus;
  sol.midpoint_boundary_values(plus, minus);
  const double h = sol.contour().grid.h;
  for (int j : {n / 4 - 7, n / 8 + 3}) {
    const cplx m = sol.contour().grid.nodes[j] + 0.5 * h;
    // quartic extrapolation to the line from d = 4h..8h
    ComplexMatrix2 lim = ComplexMatrix2::Zero();
    for (int a = 4; a <= 8; ++a) {
      double wgt = 1.0;
      for (int b = 4; b <= 8; ++b)
        if (b != a) wgt *= double(b) / double(b - a);
      lim += wgt * sol.phi(m + I * (a * h));
    }
    CHECK(dist(lim, plus[j]) < 1e-5);
    CHECK(dist(plus[j], minus[j]) > 1e-3);
  }
  CHECK_THROWS_AS(sol.phi(cplx(-1.0, 1e-3)), Error);
  try {
    sol.phi(cplx(-1.0, 1e-3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Range);
  }
}

TEST_CASE("symmetrized Y: symmetries and unit determinant") {
  Setup s;
  const auto sol = solve(s, 512, -1.0, 0.0, s.r);
  const double K = s.T.K(), Kp = s.T.Kp();
  auto pts = testsupport::torus_points(s.T.params(), 10, 11, 0.2);
  double sym = 0.0, det = 0.0;
  for (cplx p : pts) {
    // keep the probes off the contour lines
    const cplx lam(p.real(), 0.3 * Kp + 1.4 * Kp * (p.imag() + 2.0 * Kp) / (4.0 * Kp));
    const auto Y = sol.Y(lam);
    sym = std::max(sym, dist(conj_by(3, sol.Y(lam + 2.0 * K)), Y));
    sym = std::max(sym, dist(conj_by(1, sol.Y(lam + I * (2.0 * Kp))), Y));
    det = std::max(det, std::abs(Y.determinant() - 1.0));
  }
  CHECK(sym < 1e-7);
  CHECK(det < 1e-6);
}

TEST_CASE("reconstruct_L on known matrices") {
  const auto e = reconstruct_L(pauli::id());
  CHECK(e.L3 == doctest::Approx(1.0));
  const auto f = reconstruct_L(cplx(0.0, 1.0) * pauli::s1());
  CHECK(f.L3 == doctest::Approx(-1.0));
  // rotation about e2 by angle a maps e3 to (sin a, 0, cos a)
  const double a = 0.4;
  ComplexMatrix2 R;
  R << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
  const auto g = reconstruct_L(R);
  CHECK(g.L1 == doctest::Approx(std::sin(a)));
  CHECK(std::abs(g.L2) < 1e-15);
  CHECK(g.L3 == doctest::Approx(std::cos(a)));
  ComplexMatrix2 shear;
  shear << 1.0, 1.0, 0.0, 1.0;
  try {
    reconstruct_L(shear);
    FAIL("non-unit L accepted");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Consistency);
  }
}

TEST_CASE("reconstructed L is real, unit and decays in x") {
  Setup s;
  const int n = 2048;
  const auto cs = make_contour_system(s.T, n);
  const auto r = sample_reflection(cs.grid, s.r);
  double prev = 1.0;
  for (double x : {0.0, 4.0, 8.0, 12.0}) {
    const auto p = rhp_point(s.T, cs, r, x, 0.0);
    CHECK(p.L.im_residual < 1e-7);
    CHECK(p.det_residual < 1e-6);
    const double perp = std::hypot(p.L.L1, p.L.L2);
    if (x > 0.0) CHECK(perp < prev);
    prev = perp;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("mesh resolution grows with t") {
  Setup s;
  const auto zero = resolve_mesh(s.T, [](cplx) { return cplx(0.0); }, 10.0, 1.0);
  CHECK(zero.n == 256);
  int last = 0;
  for (double t : {1.0, 4.0, 16.0}) {
    const auto m = resolve_mesh(s.T, s.r, t, 1.0);
    CHECK((m.n & (m.n - 1)) == 0);
    CHECK(m.n >= last);
    CHECK(m.density >= m.required);
    last = m.n;
  }
  CHECK(last > 256);
}

TEST_CASE("IST round trip of the Gaussian bump") {
  Setup s;
  const auto bump = gaussian_bump(0.1, 2.0, 10.0, 2001);
  const auto out = ist_roundtrip(s.T, bump, 1024, 10.0, 0.5);
  double err = 0.0;
  for (double x : out.x()) {
    const Vec3 a = out.at(x), b = bump.at(x);
    err = std::max(err, (a - b).cwiseAbs().maxCoeff());
  }
  CHECK(err < 1e-6);
}
