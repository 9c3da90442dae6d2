#include "lltorus/elliptic.hpp"

#include <cmath>
#include <numbers>

#include "lltorus/errors.hpp"
#include "lltorus/quadrature.hpp"

namespace lltorus {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

double nearest_multiple(double x, double period) { return period * std::round(x / period); }

// distance from z to the lattice a Z + i b Z
double lattice_gap(cplx z, double a, double b) {
  const cplx n(nearest_multiple(z.real(), a), nearest_multiple(z.imag(), b));
  return std::abs(z - n);
}
}  // namespace

AnisotropyParams AnisotropyParams::from_J(double J1, double J2, double J3) {
  if (!(J1 < J2 && J2 < J3))
    throw Error(ErrorKind::Domain, "elliptic_core", "anisotropy requires J1 < J2 < J3")
        .with("J1", J1)
        .with("J2", J2)
        .with("J3", J3);
  AnisotropyParams p;
  p.J1 = J1;
  p.J2 = J2;
  p.J3 = J3;
  p.rho = std::sqrt(J3 - J1) / 2.0;
  p.k = std::sqrt((J2 - J1) / (J3 - J1));
  p.kprime = std::sqrt((J3 - J2) / (J3 - J1));
  const auto ce = complete_elliptic(p.k);
  p.K = ce.K;
  p.Kprime = ce.Kprime;
  return p;
}

AnisotropyParams AnisotropyParams::from_modulus(double k, double rho) {
  if (!(k > 0.0 && k < 1.0) || !(rho > 0.0))
    throw Error(ErrorKind::Domain, "elliptic_core", "need 0 < k < 1 and rho > 0").with("k", k).with("rho", rho);
  const double J3 = 4.0 * rho * rho;
  return from_J(0.0, k * k * J3, J3);
}

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

CompleteElliptic complete_elliptic(double k) {
  if (!(k > 0.0 && k < 1.0))
    throw Error(ErrorKind::Domain, "elliptic_core", "modulus outside (0,1)").with("k", k);
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  return {pi / (2.0 * agm(1.0, kp)), pi / (2.0 * agm(1.0, k))};
}

void jacobi_real(double u, double m, double& sn, double& cn, double& dn) {
  if (m < 1e-300) {
    sn = std::sin(u);
    cn = std::cos(u);
    dn = 1.0;
    return;
  }
  constexpr int kMax = 32;
  double a[kMax + 1], c[kMax + 1];
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > 1e-17 * a[n] && n < kMax) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  sn = std::sin(phi);
  cn = std::cos(phi);
  dn = std::sqrt(1.0 - m * sn * sn);
}

namespace {
struct RealJacobi {
  double s, c, d;
};

RealJacobi jacobi_reduced(double u, double m, double period4) {
  u -= nearest_multiple(u, period4);
  RealJacobi r{};
  jacobi_real(u, m, r.s, r.c, r.d);
  return r;
}

// Numerators of sn, cn, dn and the common denominator for complex argument.
struct JacobiParts {
  cplx sn_num, cn_num, dn_num;
  double den;
};

JacobiParts jacobi_parts(cplx lambda, double k, double K, double Kp) {
  const double m = k * k;
  const auto [s, c, d] = jacobi_reduced(lambda.real(), m, 4.0 * K);
  const auto [s1, c1, d1] = jacobi_reduced(lambda.imag(), 1.0 - m, 4.0 * Kp);
  JacobiParts jp;
  jp.sn_num = cplx(s * d1, c * d * s1 * c1);
  jp.cn_num = cplx(c * c1, -s * d * s1 * d1);
  jp.dn_num = cplx(d * c1 * d1, -m * s * c * s1);
  jp.den = c1 * c1 + m * s * s * s1 * s1;
  return jp;
}
}  // namespace

SnCnDn jacobi_sn_cn_dn(cplx lambda, double k) {
  if (!(k > 0.0 && k < 1.0))
    throw Error(ErrorKind::Domain, "elliptic_core", "modulus outside (0,1)").with("k", k);
  const auto ce = complete_elliptic(k);
  const auto jp = jacobi_parts(lambda, k, ce.K, ce.Kprime);
  return {jp.sn_num / jp.den, jp.cn_num / jp.den, jp.dn_num / jp.den};
}

TorusPoint TorusPoint::reduce(cplx lambda, const AnisotropyParams& p) {
  const double a = 4.0 * p.K, b = 4.0 * p.Kprime;
  return {cplx(lambda.real() - nearest_multiple(lambda.real(), a), lambda.imag() - nearest_multiple(lambda.imag(), b))};
}

LatticeDistance distance_to_lattice(cplx lambda, const AnisotropyParams& p) {
  const cplx n(nearest_multiple(lambda.real(), 2.0 * p.K), nearest_multiple(lambda.imag(), 2.0 * p.Kprime));
  return {std::abs(lambda - n), n};
}

Torus::Torus(const AnisotropyParams& p, const Tolerances& tol) : p_(p), tol_(tol) {
  q_ = std::exp(-pi * p_.Kprime / p_.K);
  // theta1'(0) and theta1'''(0)
  double d1 = 0.0, d3 = 0.0;
  for (int n = 0; n < 64; ++n) {
    const double e = (n + 0.5) * (n + 0.5);
    const double qn = std::pow(q_, e);
    const double s = (n % 2 == 0) ? 1.0 : -1.0;
    const double k = 2.0 * n + 1.0;
    d1 += 2.0 * s * qn * k;
    d3 -= 2.0 * s * qn * k * k * k;
    if (qn * k * k * k < tol_.theta_series * std::abs(d3)) break;
  }
  theta1p0_ = d1;
  eta1_ = -pi * pi * d3 / (24.0 * p_.K * d1);
  // Legendre relation eta1 w3 - eta3 w1 = i pi / 2 with w1 = 2K, w3 = 2iK'
  eta3_ = (eta1_ * cplx(0.0, 2.0 * p_.Kprime) - I * (pi / 2.0)) / (2.0 * p_.K);
  zetaK_ = zeta(cplx(p_.K, 0.0));
  beta0_ = sigma(cplx(-2.0 * p_.K, 0.0)) /
           (sigma(cplx(0.0, 2.0 * p_.Kprime)) * sigma(cplx(-2.0 * p_.K, -2.0 * p_.Kprime)));
}

cplx Torus::theta1(cplx v) const {
  cplx sum = 0.0;
  for (int n = 0; n < 64; ++n) {
    const double e = (n + 0.5) * (n + 0.5);
    const cplx term = std::pow(q_, e) * std::sin((2.0 * n + 1.0) * v);
    sum += (n % 2 == 0) ? term : -term;
    if (std::abs(term) < tol_.theta_series * std::abs(sum)) break;
  }
  return 2.0 * sum;
}

cplx Torus::theta1_logderiv(cplx v) const {
  cplx num = 0.0, den = 0.0;
  for (int n = 0; n < 64; ++n) {
    const double e = (n + 0.5) * (n + 0.5);
    const double qn = std::pow(q_, e);
    const double k = 2.0 * n + 1.0;
    const double s = (n % 2 == 0) ? qn : -qn;
    const cplx sn = std::sin(k * v), cn = std::cos(k * v);
    num += s * k * cn;
    den += s * sn;
    if (qn * k * (std::abs(sn) + std::abs(cn)) < tol_.theta_series * (std::abs(den) + std::abs(num))) break;
  }
  return num / den;
}

cplx Torus::zeta(cplx z) const {
  const double a = 4.0 * p_.K, b = 4.0 * p_.Kprime;
  const double m = std::round(z.real() / a), n = std::round(z.imag() / b);
  const cplx z0 = z - cplx(m * a, n * b);
  const cplx v = pi * z0 / (4.0 * p_.K);
  return eta1_ * z0 / (2.0 * p_.K) + (pi / (4.0 * p_.K)) * theta1_logderiv(v) + 2.0 * m * eta1_ + 2.0 * n * eta3_;
}

cplx Torus::zeta_periodic(cplx z) const { return zeta(z) - eta1_ * z / (2.0 * p_.K); }

cplx Torus::sigma(cplx z) const {
  const double a = 4.0 * p_.K, b = 4.0 * p_.Kprime;
  const double m = std::round(z.real() / a), n = std::round(z.imag() / b);
  const cplx z0 = z - cplx(m * a, n * b);
  const cplx v = pi * z0 / (4.0 * p_.K);
  const cplx s0 = (4.0 * p_.K / pi) * std::exp(eta1_ * z0 * z0 / (4.0 * p_.K)) * theta1(v) / theta1p0_;
  if (m == 0.0 && n == 0.0) return s0;
  // sigma(z + 2m w1 + 2n w3) = (-1)^{m+n+mn} exp((2m eta1 + 2n eta3)(z + m w1 + n w3)) sigma(z)
  const cplx w1(2.0 * p_.K, 0.0), w3(0.0, 2.0 * p_.Kprime);
  const long mi = std::lround(m), ni = std::lround(n);
  const double sgn = ((mi + ni + mi * ni) % 2 == 0) ? 1.0 : -1.0;
  return sgn * std::exp((2.0 * m * eta1_ + 2.0 * n * eta3_) * (z0 + m * w1 + n * w3)) * s0;
}

WTriple Torus::w_unchecked(cplx lambda) const {
  const auto jp = jacobi_parts(lambda, p_.k, p_.K, p_.Kprime);
  const double r = p_.rho;
  return {r * jp.den / jp.sn_num, r * jp.dn_num / jp.sn_num, r * jp.cn_num / jp.sn_num};
}

WTriple Torus::w(cplx lambda) const {
  const auto d = distance_to_lattice(lambda, p_);
  if (d.distance < tol_.guard_radius)
    throw Error(ErrorKind::PoleProximity, "elliptic_core", "w_j evaluated at a pole")
        .with("lambda", lambda)
        .with("nearest_pole", d.nearest);
  return w_unchecked(lambda);
}

cplx Torus::beta(cplx lambda) const {
  const double K = p_.K, Kp = p_.Kprime;
  const double g = tol_.guard_radius;
  if (lattice_gap(lambda, 4 * K, 4 * Kp) < g || lattice_gap(lambda - 2.0 * K, 4 * K, 4 * Kp) < g ||
      lattice_gap(lambda + cplx(0, 2 * Kp), 4 * K, 4 * Kp) < g ||
      lattice_gap(lambda - cplx(2 * K, 2 * Kp), 4 * K, 4 * Kp) < g)
    throw Error(ErrorKind::PoleProximity, "elliptic_core", "beta evaluated at a zero or pole").with("lambda", lambda);
  return sigma(lambda) * sigma(lambda - 2.0 * K) / (sigma(lambda + cplx(0, 2 * Kp)) * sigma(lambda - cplx(2 * K, 2 * Kp)));
}

cplx Torus::log_beta_real(double z) const {
  if (!(z > 0.0 && z < 2.0 * p_.K))
    throw Error(ErrorKind::Domain, "elliptic_core", "log beta needs 0 < z < 2K").with("z", z);
  // d/dz log beta = cs(z); integrate cs(s) - 1/s from 0 to z.
  const double m = p_.k * p_.k;
  double integral = 0.0;
  if (z < 1e-3) {
    integral = -(2.0 - m) * z * z / 12.0;
  } else {
    const auto& rule = gauss_legendre(40);
    const int panels = 1 + static_cast<int>(z / 0.25);
    const double h = z / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = p * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = a + 0.5 * h * (rule.nodes[i] + 1.0);
        double sn, cn, dn;
        jacobi_real(s, m, sn, cn, dn);
        integral += 0.5 * h * rule.weights[i] * (cn / sn - 1.0 / s);
      }
    }
  }
  return std::log(beta0_) + std::log(z) + integral;
}

cplx Torus::kernel_unchecked(cplx mu, cplx lambda) const {
  return zeta(mu - lambda) - zeta(mu - cplx(0.0, p_.Kprime)) + zeta(lambda - cplx(p_.K, p_.Kprime)) + zetaK_;
}

cplx Torus::kernel(cplx mu, cplx lambda) const {
  const double a = 4.0 * p_.K, b = 4.0 * p_.Kprime, g = tol_.guard_radius;
  const char* which = nullptr;
  if (lattice_gap(mu - lambda, a, b) < g)
    which = "mu = lambda";
  else if (lattice_gap(mu - cplx(0.0, p_.Kprime), a, b) < g)
    which = "mu = iK'";
  else if (lattice_gap(lambda - cplx(p_.K, p_.Kprime), a, b) < g)
    which = "lambda = K + iK'";
  if (which)
    throw Error(ErrorKind::PoleProximity, "elliptic_core", std::string("kernel pole: ") + which)
        .with("mu", mu)
        .with("lambda", lambda);
  return kernel_unchecked(mu, lambda);
}

cplx Torus::f_sum(cplx mu) const {
  const cplx s2K(2.0 * p_.K, 0.0), s2iK(0.0, 2.0 * p_.Kprime);
  return kernel(mu, 0.0) + kernel(mu + s2K, s2K) + kernel(mu + s2iK, s2iK) + kernel(mu + s2K + s2iK, s2K + s2iK);
}

WTriple w_functions(cplx lambda, const Torus& T) { return T.w(lambda); }
cplx weierstrass_zeta(cplx z, const Torus& T) {
  if (lattice_gap(z, 4 * T.K(), 4 * T.Kp()) < T.tolerances().guard_radius)
    throw Error(ErrorKind::PoleProximity, "elliptic_core", "zeta at a lattice point").with("z", z);
  return T.zeta(z);
}
cplx weierstrass_sigma(cplx z, const Torus& T) { return T.sigma(z); }
cplx beta_fn(cplx lambda, const Torus& T) { return T.beta(lambda); }
cplx cauchy_kernel(cplx mu, cplx lambda, const Torus& T) { return T.kernel(mu, lambda); }
cplx f_sum(cplx mu, const Torus& T) { return T.f_sum(mu); }

}  // namespace lltorus
