#include "lltorus/parametrix.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "lltorus/errors.hpp"
#include "lltorus/spectral.hpp"

namespace lltorus {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
const PcfRings rings{};

void check_overflow(cplx z) {
  const double e = std::abs((z * z).real()) / 4.0;
  if (e > default_tolerances().exponent_cap)
    throw Error(ErrorKind::Overflow, "parametrix_diag", "parabolic cylinder value overflows").with("z", z);
}

// 1F1(a; b; x) by its Maclaurin series
cplx kummer_M(cplx a, cplx b, cplx x) {
  cplx term = 1.0, sum = 1.0;
  for (int k = 0; k < 400; ++k) {
    term *= (a + double(k)) / (b + double(k)) * x / double(k + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > 4) break;
  }
  return sum;
}

// sum_s c_s / (2 z^2)^s with c_{s+1}/c_s = sgn (p + 2s)(p + 2s + 1)/(s + 1),
// cut at the smallest term
cplx asym_sum(cplx p, cplx z, double sgn) {
  const cplx q = 1.0 / (2.0 * z * z);
  cplx term = 1.0, sum = 1.0;
  double last = 1.0;
  for (int s = 0; s < 200; ++s) {
    const cplx next = term * sgn * (p + 2.0 * s) * (p + 2.0 * s + 1.0) / double(s + 1) * q;
    const double m = std::abs(next);
    if (m > last) break;
    sum += next;
    term = next;
    last = m;
    if (m < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}


}  // namespace

cplx gamma_fn(cplx z) { return std::exp(log_gamma_stirling(z)); }

cplx rgamma(cplx z) {
  if (z.real() < 0.5) {
    // sin(pi z) with the integer part removed, exactly zero at the poles
    const double n = std::round(z.real());
    const cplx sp = (std::fmod(std::abs(n), 2.0) == 1.0 ? -1.0 : 1.0) * std::sin(pi * (z - n));
    return sp / pi * gamma_fn(1.0 - z);
  }
  return std::exp(-log_gamma_stirling(z));
}

cplx pcf_D_series(cplx order, cplx z) {
  check_overflow(z);
  const cplx x = z * z / 2.0;
  const cplx c1 = std::pow(2.0, order / 2.0) * std::sqrt(pi) * rgamma((1.0 - order) / 2.0);
  const cplx c2 = -std::pow(2.0, (order + 1.0) / 2.0) * std::sqrt(pi) * rgamma(-order / 2.0);
  cplx s = c1 * kummer_M(-order / 2.0, 0.5, x);
  if (c2 != 0.0) s += c2 * z * kummer_M((1.0 - order) / 2.0, 1.5, x);
  return std::exp(-z * z / 4.0) * s;
}

cplx pcf_D_asymptotic(cplx order, cplx z) {
  check_overflow(z);
  const cplx lz = std::log(z);
  cplx out = std::exp(-z * z / 4.0 + order * lz) * asym_sum(-order, z, -1.0);
  const double ph = std::arg(z);
  if (std::abs(ph) > pi / 2.0) {
    const double sg = ph > 0 ? 1.0 : -1.0;
    const cplx coef = sg * I * std::sqrt(2.0 * pi) * rgamma(-order) * std::exp(sg * I * pi * (order + 0.5));
    if (coef != 0.0) out += coef * std::exp(z * z / 4.0 - (order + 1.0) * lz) * asym_sum(order + 1.0, z, 1.0);
  }
  return out;
}

cplx pcf_D_bridge(cplx order, cplx z) {
  check_overflow(z);
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 4>;
  const double R = std::abs(z);
  if (R == 0.0) return pcf_D_series(order, z);
  const cplx u = z / R;
  // start on the ring where |D| is smaller so the integration follows its growth
  const cplx zi = rings.series * u, zo = rings.asymptotic * u;
  const cplx di = pcf_D_series(order, zi), dout = pcf_D_asymptotic(order, zo);
  const bool inward = std::abs(dout) < std::abs(di);
  const double s0 = inward ? rings.asymptotic : rings.series;
  const cplx z0 = inward ? zo : zi;
  const cplx d0 = inward ? dout : di;
  const cplx dd0 = 0.5 * z0 * d0 - (inward ? pcf_D_asymptotic(order + 1.0, z0) : pcf_D_series(order + 1.0, z0));
  // integrate D / |D(z0)| so the tolerances are relative
  const double scale = std::abs(d0);
  const cplx u2 = u * u, c = order + 0.5;
  auto rhs = [&](const State& y, State& dy, double s) {
    const cplx D(y[0], y[1]);
    const cplx Dp(y[2], y[3]);
    const cplx zz = s * u;
    const cplx Dpp = u2 * (zz * zz / 4.0 - c) * D;
    dy = {Dp.real(), Dp.imag(), Dpp.real(), Dpp.imag()};
  };
  const cplx y0 = d0 / scale, yp0 = u * dd0 / scale;
  State y{y0.real(), y0.imag(), yp0.real(), yp0.imag()};
  auto stepper = odeint::make_controlled(1e-14, 1e-13, odeint::runge_kutta_dopri5<State>());
  double s = s0, ds = (R > s0 ? 1.0 : -1.0) * 1e-2;
  int guard = 0;
  while (std::abs(R - s) > 0.0) {
    double step = ds;
    const bool clipped = std::abs(step) >= std::abs(R - s);
    if (clipped) step = R - s;
    double trial = step;
    if (stepper.try_step(rhs, y, s, trial) == odeint::success) {
      if (!clipped) ds = trial;
    } else {
      ds = trial;
    }
    if (++guard > 200000 || std::abs(ds) < 1e-12)
      throw Error(ErrorKind::Integration, "parametrix_diag", "parabolic cylinder bridge did not converge").with("z", z);
  }
  return scale * cplx(y[0], y[1]);
}

cplx pcf_D(cplx order, cplx z) {
  const double R = std::abs(z);
  if (R <= rings.series) return pcf_D_series(order, z);
  if (R >= rings.asymptotic) return pcf_D_asymptotic(order, z);
  return pcf_D_bridge(order, z);
}

cplx pcf_Dprime(cplx order, cplx z) { return 0.5 * z * pcf_D(order, z) - pcf_D(order + 1.0, z); }

ParabolicParams make_parabolic_params(cplx r0, double p0, double t) {
  if (r0 == 0.0) throw Error(ErrorKind::Range, "parametrix_diag", "a and b are undefined at r0 = 0");
  ParabolicParams P;
  P.r0 = r0;
  P.p0 = p0;
  P.t = t;
  P.nu = nu_of(r0);
  const cplx e = std::exp(2.0 * I * t * p0);
  P.a = I * std::sqrt(2.0 * pi) * std::exp(-2.0 * pi * P.nu) * rgamma(-I * P.nu) / (r0 * e);
  P.b = std::sqrt(2.0 * pi) * std::exp(3.0 * pi * P.nu) * rgamma(I * P.nu) / (std::conj(r0) / e);
  return P;
}

double dab_arg(cplx xi) {
  double th = std::arg(xi);
  if (th <= pi / 4.0) th += 2.0 * pi;
  return th;
}

cplx dab_power(cplx xi, cplx s) { return std::exp(s * cplx(std::log(std::abs(xi)), dab_arg(xi))); }

int dab_sector(cplx xi, double ray_tol) {
  if (xi == 0.0) throw Error(ErrorKind::Domain, "parametrix_diag", "D_ab sector is undefined at xi = 0");
  const double th = dab_arg(xi);
  static const std::array<double, 6> rays{pi / 4, pi / 2, pi, 3 * pi / 2, 2 * pi, 9 * pi / 4};
  for (double r : rays)
    if (std::abs(th - r) <= ray_tol)
      throw Error(ErrorKind::Domain, "parametrix_diag", "xi lies on a ray of the D_ab contour; pick a side")
          .with("xi", xi)
          .with("arg", th);
  for (int k = 0; k < 5; ++k)
    if (th < rays[k + 1]) return k;
  return 4;
}

ComplexMatrix2 Dab_sector(cplx xi, const ParabolicParams& P, int sector) {
  const cplx ab = P.a * P.b;
  // rotation of the argument and the column factor, per sector
  struct Row {
    cplx rot1, fac1, rot2, fac2;
  };
  const cplx a = P.a;
  const std::array<Row, 5> table{{
      {-I, std::exp(I * pi * ab / 2.0), 1.0, -a},
      {-I, std::exp(I * pi * ab / 2.0), -1.0, a * std::exp(-I * pi * ab)},
      {I, std::exp(3.0 * I * pi * ab / 2.0), -1.0, a * std::exp(-I * pi * ab)},
      {I, std::exp(3.0 * I * pi * ab / 2.0), 1.0, -a * std::exp(-2.0 * I * pi * ab)},
      {-I, std::exp(5.0 * I * pi * ab / 2.0), 1.0, -a * std::exp(-2.0 * I * pi * ab)},
  }};
  if (sector < 0 || sector > 4) throw Error(ErrorKind::Domain, "parametrix_diag", "sector index out of range").with("sector", double(sector));
  const Row& R = table[sector];
  const cplx m1 = ab, m2 = -ab - 1.0;
  const cplx z1 = R.rot1 * xi, z2 = R.rot2 * xi;
  const cplx f = R.fac1 * pcf_D(m1, z1);
  const cplx fp = R.fac1 * R.rot1 * pcf_Dprime(m1, z1);
  const cplx g = R.fac2 * pcf_D(m2, z2);
  const cplx gp = R.fac2 * R.rot2 * pcf_Dprime(m2, z2);
  ComplexMatrix2 M;
  M << f, g, (fp - 0.5 * xi * f) / a, (gp - 0.5 * xi * g) / a;
  return M;
}

ComplexMatrix2 Dab_matrix(cplx xi, const ParabolicParams& P) { return Dab_sector(xi, P, dab_sector(xi)); }

ComplexMatrix2 dab_m1(const ParabolicParams& P) {
  ComplexMatrix2 m;
  m << 0.0, -P.a, P.b, 0.0;
  return m;
}

ComplexMatrix2 dab_m2(const ParabolicParams& P) {
  const cplx ab = P.a * P.b;
  ComplexMatrix2 m;
  m << ab * (ab - 1.0) / 2.0, 0.0, 0.0, -ab * (ab + 1.0) / 2.0;
  return m;
}

ComplexMatrix2 dab_m2_printed(const ParabolicParams& P) {
  const cplx ab = P.a * P.b;
  ComplexMatrix2 m;
  m << ab * (ab - 1.0) / 2.0, 0.0, 0.0, ab * (ab + 1.0) / 2.0;
  return m;
}

ComplexMatrix2 dab_expansion_remainder(cplx xi, const ParabolicParams& P, const ComplexMatrix2& m2) {
  const cplx ab = P.a * P.b;
  const ComplexMatrix2 M =
      Dab_matrix(xi, P) * exp_sigma3(-xi * xi / 4.0) * exp_sigma3(-ab * cplx(std::log(std::abs(xi)), dab_arg(xi)));
  return M - pauli::id() - dab_m1(P) / xi - m2 / (xi * xi);
}

ExpansionCoefficients dab_expansion_numeric(const ParabolicParams& P, double theta, double R) {
  const ComplexMatrix2 zero = ComplexMatrix2::Zero();
  auto m1_at = [&](double s) {
    const cplx xi = std::polar(s, theta);
    return ComplexMatrix2((dab_expansion_remainder(xi, P, zero) + dab_m1(P) / xi) * xi);
  };
  auto m2_at = [&](double s) {
    const cplx xi = std::polar(s, theta);
    return ComplexMatrix2(dab_expansion_remainder(xi, P, zero) * xi * xi);
  };
  // both estimates carry an O(1/xi) error
  ExpansionCoefficients c;
  c.m1 = 2.0 * m1_at(2.0 * R) - m1_at(R);
  c.m2 = 2.0 * m2_at(2.0 * R) - m2_at(R);
  return c;
}

ComplexMatrix2 dab_expected_jump(const ParabolicParams& P, int k) {
  const double q = 1.0 + std::norm(P.r0);
  const cplx e = std::exp(2.0 * I * P.t * P.p0);
  const cplx E1 = -P.r0 * e, E2 = -std::conj(P.r0) / e;
  ComplexMatrix2 m;
  switch (k) {
    case 0: m << 1.0, -E2 / q, 0.0, 1.0; break;
    case 1: m << 1.0, 0.0, E1, 1.0; break;
    case 2: m << 1.0, E2, 0.0, 1.0; break;
    case 3: m << 1.0, 0.0, -E1 / q, 1.0; break;
    case 4: m << q, 0.0, 0.0, 1.0 / q; break;
    default: throw Error(ErrorKind::Domain, "parametrix_diag", "ray index out of range").with("ray", double(k));
  }
  return m;
}

ComplexMatrix2 dab_ray_jump(const ParabolicParams& P, int k, double radius) {
  static const std::array<double, 5> rays{pi / 2, pi, 3 * pi / 2, 2 * pi, pi / 4};
  if (k < 0 || k > 4) throw Error(ErrorKind::Domain, "parametrix_diag", "ray index out of range").with("ray", double(k));
  const cplx xi = std::polar(radius, rays[k]);
  const ComplexMatrix2 minus = Dab_sector(xi, P, k);
  const ComplexMatrix2 plus = Dab_sector(xi, P, (k + 1) % 5);
  return checked_inverse(minus, default_tolerances().det_floor) * plus;
}

cplx xi_gamma(const AsymptoticInputs& in) { return std::exp(I * pi / 4.0) * std::sqrt(2.0 * in.phi0); }

cplx xi_map(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in) {
  const double K = T.K(), Kp = T.Kp();
  // p is 2K-periodic and 4iK'-periodic
  cplx l = lambda;
  l -= 2.0 * K * std::round((l.real() - in.lambda0) / (2.0 * K));
  l -= 4.0 * I * Kp * std::round(l.imag() / (4.0 * Kp));
  const cplx d = l - in.lambda0;
  if (d == 0.0) return 0.0;
  const cplx lin = xi_gamma(in) * std::sqrt(t) * d;
  const cplx root = std::sqrt(4.0 * I * t * (in.p0 - p_exponent(T, l, in.kappa)));
  const cplx xi = std::abs(root - lin) <= std::abs(root + lin) ? root : -root;
  if (std::abs(xi - lin) > 0.5 * std::abs(lin))
    throw Error(ErrorKind::Range, "parametrix_diag", "branch of xi is ambiguous this far from lambda0")
        .with("lambda", lambda)
        .with("distance", std::abs(d));
  return xi;
}

cplx xi_tilde(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in) {
  return xi_map(T, lambda + 2.0 * I * T.Kp(), t, in);
}

double disc_radius(double t, double epsilon) { return std::pow(t, -0.5 + epsilon); }

int local_disc(const Torus& T, cplx lambda, double lambda0, double radius) {
  const double K = T.K(), Kp = T.Kp();
  const std::array<cplx, 4> centers{cplx(lambda0), lambda0 + 2.0 * K, lambda0 + 2.0 * I * Kp,
                                    lambda0 + 2.0 * K + 2.0 * I * Kp};
  for (int j = 0; j < 4; ++j) {
    cplx d = lambda - centers[j];
    d -= 4.0 * K * std::round(d.real() / (4.0 * K));
    d -= 4.0 * I * Kp * std::round(d.imag() / (4.0 * Kp));
    if (std::abs(d) <= radius) return j;
  }
  return -1;
}

ComplexMatrix2 global_parametrix(const Torus& T, cplx lambda, const AsymptoticInputs& in, const ReflectionFn& r) {
  return exp_sigma3(log_alpha_global(T, in.lambda0, r, lambda));
}

namespace {
// alpha^{s3} xi^{-i nu s3} D_ab(xi) e^{-xi^2 s3/4}
ComplexMatrix2 core_parametrix(cplx log_alpha, cplx xi, const ParabolicParams& P) {
  const ComplexMatrix2 D = Dab_matrix(xi, P);
  const cplx pw = -I * P.nu * cplx(std::log(std::abs(xi)), dab_arg(xi));
  return exp_sigma3(log_alpha + pw) * D * exp_sigma3(-xi * xi / 4.0);
}
}  // namespace

ComplexMatrix2 local_parametrix(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in,
                                const ReflectionFn& r, double radius) {
  const int disc = local_disc(T, lambda, in.lambda0, radius);
  if (disc < 0)
    throw Error(ErrorKind::Domain, "parametrix_diag", "lambda lies outside the local discs")
        .with("lambda", lambda)
        .with("radius", radius);
  const ParabolicParams P = make_parabolic_params(in.r0, in.p0, t);
  const double K = T.K(), Kp = T.Kp();
  switch (disc) {
    case 0:
      return core_parametrix(log_alpha_global(T, in.lambda0, r, lambda), xi_map(T, lambda, t, in), P);
    case 1:
      return conj_by(3, core_parametrix(log_alpha_global(T, in.lambda0, r, lambda), xi_map(T, lambda, t, in), P));
    case 2:
      return conj_by(1, core_parametrix(log_alpha_global(T, in.lambda0, r, lambda + 2.0 * I * Kp),
                                        xi_tilde(T, lambda, t, in), P));
    default:
      return conj_by(2, core_parametrix(log_alpha_global(T, in.lambda0, r, lambda + 2.0 * K + 2.0 * I * Kp),
                                        xi_tilde(T, lambda, t, in), P));
  }
}

GRSample gr_sample(const Torus& T, cplx lambda, double t, const AsymptoticInputs& in, const ReflectionFn& r,
                   double radius) {
  GRSample s;
  s.lambda = lambda;
  s.xi = xi_map(T, lambda, t, in);
  const ParabolicParams P = make_parabolic_params(in.r0, in.p0, t);
  const cplx la = log_alpha_global(T, in.lambda0, r, lambda);
  const ComplexMatrix2 Tgl = exp_sigma3(la);
  const ComplexMatrix2 Tloc = local_parametrix(T, lambda, t, in, r, radius);
  s.G = Tgl * checked_inverse(Tloc, default_tolerances().det_floor);
  const ComplexMatrix2 A = exp_sigma3(la - I * P.nu * cplx(std::log(std::abs(s.xi)), dab_arg(s.xi)));
  const ComplexMatrix2 lead = A * dab_m1(P) * A.inverse() / s.xi;
  s.minus_m1 = pauli::id() - lead;
  s.plus_m1 = pauli::id() + lead;
  const cplx g = xi_gamma(in);
  const cplx gt = std::exp(-I * P.nu * std::log(g * g * t / (in.beta0 * in.beta0)) + 2.0 * pi * P.nu);
  const cplx ic0 = la - I * P.nu * std::log(T.beta(in.lambda0 - lambda));
  ComplexMatrix2 pr;
  pr << 0.0, -P.a * gt * std::exp(2.0 * ic0), P.b / gt * std::exp(-2.0 * ic0), 0.0;
  s.printed = pauli::id() + pr / s.xi;
  s.corrected = pauli::id() - pr / s.xi;
  return s;
}

GRCircle gr_circle(const Torus& T, double t, const AsymptoticInputs& in, const ReflectionFn& r, double radius,
                   int samples) {
  GRCircle out;
  out.radius = radius;
  out.t = t;
  for (int j = 0; j < samples; ++j) {
    // offset by half a step so no sample sits on a ray or on the cut
    const double ph = 2.0 * pi * (j + 0.5) / samples;
    const cplx lambda = in.lambda0 + std::polar(radius, ph);
    const GRSample s = gr_sample(T, lambda, t, in, r, radius * (1.0 + 1e-12));
    out.err_minus = std::max(out.err_minus, max_abs(s.G - s.minus_m1));
    out.err_plus = std::max(out.err_plus, max_abs(s.G - s.plus_m1));
    out.err_printed = std::max(out.err_printed, max_abs(s.G - s.printed));
    out.err_corrected = std::max(out.err_corrected, max_abs(s.G - s.corrected));
    out.printed_vs_plus = std::max(out.printed_vs_plus, max_abs(s.printed - s.plus_m1));
    const ComplexMatrix2 M = checked_inverse(s.G, default_tolerances().det_floor) - pauli::id();
    out.matching = std::max(out.matching, max_abs(M));
  }
  return out;
}

}  // namespace lltorus
