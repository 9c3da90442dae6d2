#include "lltorus/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "lltorus/errors.hpp"
#include "lltorus/quadrature.hpp"
#include "lltorus/spectral.hpp"

namespace lltorus {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

struct Panel {
  double a, b;
};

// Panels on [a, b] graded geometrically toward x in [a, b], bulk panels no
// wider than `width`, finest panels of size `floor` next to x.
std::vector<Panel> graded_panels(double a, double b, double x, double width, double floor) {
  std::vector<Panel> out;
  auto side = [&](double from, double to) {  // from = x end, to = far end
    const double L = std::abs(to - from);
    if (L <= 0.0) return;
    const double dir = to > from ? 1.0 : -1.0;
    std::vector<double> cuts{0.0};
    for (double s = std::max(floor, 1e-300); s < L; s *= 2.0) cuts.push_back(s);
    cuts.push_back(L);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      const int m = std::max(1, int(std::ceil((hi - lo) / width)));
      for (int k = 0; k < m; ++k) {
        const double p = from + dir * (lo + (hi - lo) * k / m);
        const double q = from + dir * (lo + (hi - lo) * (k + 1) / m);
        out.push_back({std::min(p, q), std::max(p, q)});
      }
    }
  };
  side(x, a);
  side(x, b);
  return out;
}

template <class F>
auto integrate(const std::vector<Panel>& panels, int order, F&& f) {
  const auto& rule = gauss_legendre(order);
  decltype(f(0.0)) sum{};
  for (const auto& p : panels) {
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += (h * rule.weights[i]) * f(c + h * rule.nodes[i]);
  }
  return sum;
}

double g_of(const ReflectionFn& r, double eta) { return std::log1p(std::norm(r(cplx(eta, 0.0)))); }

// w3(z)/rho - 1/z, with the Laurent tail near 0 to avoid cancellation
cplx w3_regular(const Torus& T, cplx z) {
  if (std::abs(z) < 1e-4) {
    const double m = T.params().k * T.params().k;
    return -(2.0 - m) * z / 6.0;
  }
  return T.w(z).w3 / T.rho() - 1.0 / z;
}

// int_a^b g(eta) w3(eta - lambda)/rho deta for lambda near the segment [a, b]
// (|eta - lambda| < 2K); the singular part is subtracted at x* = Re lambda.
cplx cut_integral(const Torus& T, const ReflectionFn& r, double a, double b, cplx lambda) {
  const double xs = std::clamp(lambda.real(), a, b);
  const double d = std::abs(lambda - xs);
  if (d < 1e-14)
    throw Error(ErrorKind::Domain, "asymptotics", "evaluation on the cut").with("lambda", lambda).with("cut_start", a);
  const auto panels = graded_panels(a, b, xs, 0.1, std::min(0.05, 0.1 * d));
  if (d > 0.25) {
    return integrate(panels, 20, [&](double eta) -> cplx {
      const double g = g_of(r, eta);
      return g == 0.0 ? cplx(0.0) : g * T.w(eta - lambda).w3 / T.rho();
    });
  }
  const double gs = g_of(r, xs);
  const cplx smooth = integrate(panels, 20, [&](double eta) -> cplx {
    const cplx z = eta - lambda;
    const double g = g_of(r, eta);
    return (g - gs) / z + g * w3_regular(T, z);
  });
  return smooth + gs * std::log((b - lambda) / (a - lambda));
}

// reduce lambda to the cell around the cut centre c; returns +-1 for the
// inversions picked up by shifts of 2iK'
int reduce_to_cell(const Torus& T, double c, cplx& lambda) {
  const double K = T.K(), Kp = T.Kp();
  double x = lambda.real(), y = lambda.imag();
  x -= 2.0 * K * std::floor((x - (c - K)) / (2.0 * K));
  const double k = std::floor((y + Kp) / (2.0 * Kp));
  y -= 2.0 * Kp * k;
  lambda = cplx(x, y);
  return (long long)(k) % 2 == 0 ? 1 : -1;
}

cplx log_integral_cell(const Torus& T, const ReflectionFn& r, double a, double b, cplx lambda) {
  const int s = reduce_to_cell(T, 0.5 * (a + b), lambda);
  return double(s) * cut_integral(T, r, a, b, lambda) / (2.0 * pi * I);
}
}  // namespace

double nu_of(cplx r0) { return std::log1p(std::norm(r0)) / (2.0 * pi); }

cplx log_gamma_stirling(cplx z) {
  if (z.real() < 0.0) {
    // reflection; the branch matches the recurrence form up to 2 pi i
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma_stirling(1.0 - z);
  }
  cplx shift = 0.0;
  while (std::abs(z) < 15.0 || z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  static constexpr std::array<double, 8> B = {1.0 / 6,   -1.0 / 30,   1.0 / 42,   -1.0 / 30,
                                              5.0 / 66,  -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  cplx series = 0.0, zp = z;
  const cplx z2 = z * z;
  for (std::size_t k = 0; k < B.size(); ++k) {
    const double n = 2.0 * (k + 1);
    series += B[k] / (n * (n - 1.0) * zp);
    zp *= z2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift;
}

double arg_gamma_i(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorKind::Range, "asymptotics", "arg Gamma(i nu) needs nu > 0").with("nu", nu);
  return log_gamma_stirling(cplx(0.0, nu)).imag();
}

namespace {
cplx c0_quadrature(const Torus& T, double lambda0, const ReflectionFn& r, int order, double floor) {
  const double h = 1e-3;
  auto dg = [&](double eta) {
    return (g_of(r, eta + 3 * h) - 9.0 * g_of(r, eta + 2 * h) + 45.0 * g_of(r, eta + h) - 45.0 * g_of(r, eta - h) +
            9.0 * g_of(r, eta - 2 * h) - g_of(r, eta - 3 * h)) /
           (60.0 * h);
  };
  const auto panels = graded_panels(lambda0, 0.0, lambda0, 0.125, floor);
  return integrate(panels, order, [&](double eta) -> cplx {
           const double z = eta - lambda0;
           if (z <= 0.0 || z >= 2.0 * T.K()) return 0.0;
           return dg(eta) * T.log_beta_real(z);
         }) /
         (2.0 * pi);
}
}  // namespace

C0Result c0_of(const Torus& T, double lambda0, const ReflectionFn& r) {
  if (!(lambda0 < 0.0 && lambda0 > -2.0 * T.K()))
    throw Error(ErrorKind::Domain, "asymptotics", "lambda0 outside (-2K, 0)").with("lambda0", lambda0);
  const cplx coarse = c0_quadrature(T, lambda0, r, 16, 1e-12);
  const cplx fine = c0_quadrature(T, lambda0, r, 24, 1e-14);
  C0Result out{fine, std::abs(fine - coarse)};
  if (out.refinement_change > 1e-6)
    throw Error(ErrorKind::Integration, "asymptotics", "c0 quadrature did not converge; refine the sampling of r")
        .with("change", out.refinement_change);
  return out;
}

cplx c0_by_parts(const Torus& T, double lambda0, const ReflectionFn& r) {
  const double g0 = g_of(r, lambda0);
  const auto panels = graded_panels(lambda0, 0.0, lambda0, 0.125, 1e-12);
  const cplx integral = integrate(panels, 24, [&](double eta) -> cplx {
    const double z = eta - lambda0;
    const double dgv = g_of(r, eta) - g0;
    if (z < 1e-6) {
      // (g - g0) w3 / rho -> g'(lambda0) as eta -> lambda0
      const double e = 1e-6;
      return (g_of(r, lambda0 + e) - g_of(r, lambda0 - e)) / (2.0 * e);
    }
    return dgv * T.w(z).w3 / T.rho();
  });
  return -(g0 * T.log_beta_real(-lambda0) + integral) / (2.0 * pi);
}

cplx log_alpha_global(const Torus& T, double lambda0, const ReflectionFn& r, cplx lambda) {
  return log_integral_cell(T, r, lambda0, 0.0, lambda);
}

cplx alpha_global(const Torus& T, double lambda0, const ReflectionFn& r, cplx lambda) {
  return std::exp(log_alpha_global(T, lambda0, r, lambda));
}

cplx alpha_at_zero(const Torus& T, double lambda0, const ReflectionFn& r) {
  const auto panels = graded_panels(lambda0, 0.0, 0.0, 0.1, 1e-3);
  const cplx s = integrate(panels, 20, [&](double eta) -> cplx {
    const double g = g_of(r, eta);
    return g == 0.0 ? cplx(0.0) : g * T.w(eta).w3 / T.rho();
  });
  return std::exp(s / (2.0 * pi * I));
}

cplx delta_fn(const Torus& T, const ReflectionFn& r, cplx lambda) {
  return std::exp(log_integral_cell(T, r, -2.0 * T.K(), 0.0, lambda));
}

AsymptoticInputs make_inputs(const Torus& T, double kappa, const ReflectionFn& r) {
  const auto sp = find_lambda0(T, kappa);
  AsymptoticInputs in;
  in.kappa = kappa;
  in.lambda0 = sp.lambda0;
  in.phi0 = sp.phi0;
  in.p0 = sp.p_at;
  in.r0 = r(sp.lambda0);
  in.nu = nu_of(in.r0);
  const auto c0 = c0_of(T, sp.lambda0, r);
  in.c0 = c0.value;
  in.c0_refinement = c0.refinement_change;
  in.beta0 = T.beta0();
  const auto w = T.w(sp.lambda0);
  in.w1 = w.w1.real();
  in.w2 = w.w2.real();
  in.rho = T.rho();
  return in;
}

ThetaResult theta(double x, double t, const AsymptoticInputs& in) {
  if (!(t > 0.0)) throw Error(ErrorKind::Domain, "asymptotics", "theta needs t > 0").with("t", t);
  if (std::abs(x / t - in.kappa) > 1e-12 * (1.0 + std::abs(in.kappa)))
    throw Error(ErrorKind::Domain, "asymptotics", "x/t does not match the inputs' kappa").with("x", x).with("t", t).with("kappa", in.kappa);
  if (!(in.nu > 0.0))
    throw Error(ErrorKind::Range, "asymptotics", "theta is undefined at nu = 0 (amplitude vanishes)").with("nu", in.nu);
  // nu log(2 phi0 / beta0^2) with the principal branch of log beta0, the
  // same branch that log beta carries inside c0
  const cplx full = 2.0 * t * in.p0 + in.nu * std::log(t) - pi / 4.0 - arg_gamma_i(in.nu) + std::arg(in.r0) -
                    2.0 * in.c0 + in.nu * (std::log(2.0 * in.phi0) - 2.0 * std::log(in.beta0));
  // The printed phase is off by pi against the numerical RHP solution with
  // the same r (the difference converges to pi like 1/t).  The sign of the
  // 1/xi term of the jump on the circle around lambda0 is flipped in the
  // printed leading term; see gr_circle.
  return {full.real() + pi, full.real(), std::abs(full.imag())};
}

AsymptoticL asymptotic_L(double x, double t, const AsymptoticInputs& in) {
  AsymptoticL out;
  if (!(t > 0.0)) throw Error(ErrorKind::Domain, "asymptotics", "asymptotic_L needs t > 0").with("t", t);
  if (in.nu == 0.0) return out;
  const double th = theta(x, t, in).theta;
  out.theta = th;
  out.amplitude = std::sqrt(2.0 * in.nu / (t * in.phi0));
  out.L1 = out.amplitude * in.w2 * std::cos(th) / in.rho;
  out.L2 = out.amplitude * in.w1 * std::sin(th) / in.rho;
  out.L3 = 1.0 - 0.5 * (out.L1 * out.L1 + out.L2 * out.L2);
  return out;
}

}  // namespace lltorus
