#include "lltorus/scattering.hpp"

#include <array>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "lltorus/errors.hpp"
#include "lltorus/parallel.hpp"

namespace lltorus {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

struct SpinField::Splines {
  std::array<boost::math::interpolators::cardinal_cubic_b_spline<double>, 3> s;
};

SpinField SpinField::from_samples(std::vector<double> x, std::vector<Vec3> L) {
  if (x.size() < 4 || x.size() != L.size())
    throw Error(ErrorKind::Domain, "direct_scattering", "spin field needs at least 4 matching samples")
        .with("n_x", double(x.size()))
        .with("n_L", double(L.size()));
  const double h = x[1] - x[0];
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw Error(ErrorKind::Domain, "direct_scattering", "spin field grid is not uniform").with("index", double(i));
  SpinField f;
  f.x_ = std::move(x);
  f.L_ = std::move(L);
  auto sp = std::make_shared<Splines>();
  for (int c = 0; c < 3; ++c) {
    std::vector<double> v(f.L_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.L_[i][c];
    // clamped ends: the field is constant in the tails
    sp->s[c] = boost::math::interpolators::cardinal_cubic_b_spline<double>(v.begin(), v.end(), f.x_[0], h, 0.0, 0.0);
  }
  f.splines_ = sp;
  return f;
}

SpinField SpinField::from_function(const std::function<Vec3(double)>& fn, double X, std::size_t n) {
  std::vector<double> x(n);
  std::vector<Vec3> L(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -X + 2.0 * X * double(i) / double(n - 1);
    L[i] = fn(x[i]);
  }
  auto f = from_samples(std::move(x), std::move(L));
  f.exact_ = fn;
  return f;
}

Vec3 SpinField::at(double x) const {
  if (exact_) return exact_(x);
  if (x <= x_.front()) return L_.front();
  if (x >= x_.back()) return L_.back();
  return Vec3(splines_->s[0](x), splines_->s[1](x), splines_->s[2](x));
}

void SpinField::validate(const Tolerances& tol) const {
  for (std::size_t i = 0; i < L_.size(); ++i)
    if (std::abs(L_[i].squaredNorm() - 1.0) > tol.unit_norm)
      throw Error(ErrorKind::Domain, "direct_scattering", "spin field is not unit length")
          .with("x", x_[i])
          .with("norm2", L_[i].squaredNorm());
  const Vec3 e3(0, 0, 1);
  for (std::size_t i : {std::size_t(0), L_.size() - 1})
    if ((L_[i] - e3).norm() > tol.tail_eps)
      throw Error(ErrorKind::Domain, "direct_scattering", "spin field tail does not reach (0,0,1)")
          .with("x", x_[i])
          .with("deviation", (L_[i] - e3).norm());
}

SpinField gaussian_bump(double amplitude, double width, double X, std::size_t n) {
  return SpinField::from_function(
      [=](double x) {
        const double l1 = amplitude * std::exp(-(x / width) * (x / width));
        return Vec3(l1, 0.0, std::sqrt(1.0 - l1 * l1));
      },
      X, n);
}

ComplexMatrix2 lax_U(const WTriple& w, const Vec3& L) {
  ComplexMatrix2 U;
  const cplx c1 = L[0] * w.w1, c2 = L[1] * w.w2, c3 = L[2] * w.w3;
  // -i (c1 s1 + c2 s2 + c3 s3)
  U << -I * c3, -I * c1 - c2, -I * c1 + c2, I * c3;
  return U;
}

std::vector<ComplexMatrix2> jost_solve(const Torus& T, cplx lambda, const SpinField& field, JostSide side,
                                       const std::vector<double>& xs) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 8>;
  const auto w = T.w(lambda);
  const Tolerances& tol = T.tolerances();
  const cplx iw3 = I * w.w3;

  auto rhs = [&](const State& s, State& ds, double x) {
    ComplexMatrix2 Y;
    Y << cplx(s[0], s[1]), cplx(s[2], s[3]), cplx(s[4], s[5]), cplx(s[6], s[7]);
    const ComplexMatrix2 U = lax_U(w, field.at(x));
    ComplexMatrix2 D = U * Y;
    D.col(0) += iw3 * Y.col(0);
    D.col(1) -= iw3 * Y.col(1);
    ds = {D(0, 0).real(), D(0, 0).imag(), D(0, 1).real(), D(0, 1).imag(),
          D(1, 0).real(), D(1, 0).imag(), D(1, 1).real(), D(1, 1).imag()};
  };

  const double start = side == JostSide::Minus ? -field.X() : field.X();
  const double dir = side == JostSide::Minus ? 1.0 : -1.0;
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dir * xs[a] < dir * xs[b]; });

  auto stepper = odeint::make_controlled(tol.jost_atol, tol.jost_rtol, odeint::runge_kutta_dopri5<State>());
  State s{1, 0, 0, 0, 0, 0, 1, 0};
  double x = start;
  const double max_step = std::max(0.25, 4.0 * field.dx());
  double dt = dir * std::min(1e-2, max_step);
  std::vector<ComplexMatrix2> out(xs.size());
  for (std::size_t idx : order) {
    const double target = xs[idx];
    if (dir * (target - start) < 0.0)
      throw Error(ErrorKind::Domain, "direct_scattering", "evaluation point outside the field domain").with("x", target);
    while (dir * (target - x) > 0.0) {
      const double remaining = target - x;
      double step = dir * std::min(std::abs(dt), max_step);
      const bool clipped = std::abs(step) >= std::abs(remaining);
      if (clipped) step = remaining;
      double trial = step;
      const auto res = stepper.try_step(rhs, s, x, trial);
      if (res == odeint::success) {
        if (!clipped) dt = trial;
      } else {
        dt = trial;
        if (std::abs(dt) < tol.jost_min_step)
          throw Error(ErrorKind::Integration, "direct_scattering", "Jost integration step fell below the floor")
              .with("lambda", lambda)
              .with("x", x)
              .with("step_floor", tol.jost_min_step);
      }
    }
    ComplexMatrix2 Y;
    Y << cplx(s[0], s[1]), cplx(s[2], s[3]), cplx(s[4], s[5]), cplx(s[6], s[7]);
    out[idx] = Y;
  }
  return out;
}

Coefficients scattering_coeffs(const Torus& T, cplx lambda, const SpinField& field, double x_eval) {
  const auto Yp = jost_solve(T, lambda, field, JostSide::Plus, {x_eval})[0];
  const auto Ym = jost_solve(T, lambda, field, JostSide::Minus, {x_eval})[0];
  const cplx w3 = T.w(lambda).w3;
  Coefficients c;
  c.a = Yp(0, 0) * Ym(1, 1) - Yp(1, 0) * Ym(0, 1);
  c.b = std::exp(-2.0 * I * w3 * x_eval) * (Ym(0, 0) * Yp(1, 0) - Ym(1, 0) * Yp(0, 0));
  return c;
}

ContourGrid ContourGrid::make(const Torus& T, int n) {
  if (n < 8 || n % 4 != 0)
    throw Error(ErrorKind::Config, "direct_scattering", "contour nodes per line must be a multiple of 4, at least 8")
        .with("n", double(n));
  ContourGrid g;
  g.n = n;
  g.K = T.K();
  g.Kp = T.Kp();
  g.h = 4.0 * g.K / n;
  g.nodes.resize(2 * n);
  for (int j = 0; j < n; ++j) {
    g.nodes[j] = cplx(g.s(j), 0.0);
    g.nodes[n + j] = cplx(g.s(j), 2.0 * g.Kp);
  }
  return g;
}

ScatteringData compute_scattering(const Torus& T, const SpinField& field, int n) {
  field.validate(T.tolerances());
  ScatteringData d;
  d.grid = ContourGrid::make(T, n);
  const std::size_t m = d.grid.nodes.size();
  d.a.assign(m, 1.0);
  d.b.assign(m, 0.0);
  const double guard = T.tolerances().guard_radius;
  parallel_for(m, [&](std::size_t j) {
    const cplx lam = d.grid.nodes[j];
    if (distance_to_lattice(lam, T.params()).distance < guard) return;
    const auto c = scattering_coeffs(T, lam, field, 0.0);
    d.a[j] = c.a;
    d.b[j] = c.b;
  });
  reflection(d);
  return d;
}

int winding_number(const ScatteringData& d) {
  const int n = d.grid.n;
  auto sweep = [&](int off) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const cplx a0 = d.a[off + j], a1 = d.a[off + (j + 1) % n];
      const double step = std::arg(a1 / a0);
      if (std::abs(step) > pi / 2)
        throw Error(ErrorKind::Consistency, "direct_scattering", "phase of a jumps by more than pi/2 between nodes")
            .with("lambda", d.grid.nodes[off + j])
            .with("jump", step);
      total += step;
    }
    return total;
  };
  // a(lambda + 2K) = a(lambda) makes the two vertical sides cancel
  const double phase = sweep(0) - sweep(n);
  return static_cast<int>(std::lround(phase / (2.0 * pi)));
}

void reflection(ScatteringData& d) {
  const std::size_t m = d.a.size();
  d.r.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(d.a[j]) < 1e-300)
      throw Error(ErrorKind::SolitonPresent, "direct_scattering", "a vanishes on the contour").with("lambda", d.grid.nodes[j]);
    d.r[j] = d.b[j] / d.a[j];
  }
  d.winding = winding_number(d);
  d.soliton_free = d.winding == 0;
  if (!d.soliton_free)
    throw Error(ErrorKind::SolitonPresent, "direct_scattering", "a winds around the boundary of Omega+")
        .with("winding", double(d.winding));
}

ScatteringData evolve_scattering(const Torus& T, const ScatteringData& d, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::Domain, "direct_scattering", "time must be nonnegative").with("t", t);
  ScatteringData e = d;
  e.t = d.t + t;
  for (std::size_t j = 0; j < e.b.size(); ++j) {
    const cplx lam = e.grid.nodes[j];
    if (distance_to_lattice(lam, T.params()).distance < T.tolerances().guard_radius) continue;
    const auto w = T.w(lam);
    const cplx f = std::exp(-4.0 * I * t * w.w1 * w.w2);
    e.b[j] *= f;
    e.r[j] *= f;
  }
  return e;
}

namespace {
// g = log(1 + |r|^2) on the m = n/2 nodes of (-2K, 0).
std::vector<double> dispersion_density(const ContourGrid& grid, const std::vector<cplx>& r) {
  const int m = grid.n / 2;
  std::vector<double> g(m);
  for (int j = 0; j < m; ++j) g[j] = std::log1p(std::norm(r[j]));
  return g;
}

std::vector<double> periodic_derivative(const std::vector<double>& g, double period) {
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, g);
  const int m = int(g.size());
  for (int k = 0; k < m; ++k) {
    const int kk = k <= m / 2 ? k : k - m;
    spec[k] *= (2 * kk == m) ? cplx(0.0) : I * (2.0 * pi * kk / period);
  }
  std::vector<double> d;
  fft.inv(d, spec);
  return d;
}
}  // namespace

DispersionResult dispersion_a(const Torus& T, const ContourGrid& grid, const std::vector<cplx>& r, double tol) {
  const int n = grid.n, m = n / 2;
  const double h = grid.h, rho = T.rho();
  const auto g = dispersion_density(grid, r);
  const auto dg = periodic_derivative(g, 2.0 * grid.K);
  // kernel depends on the offset (j - i) mod m only
  std::vector<double> kern(m, 0.0);
  for (int d = 1; d < m; ++d) kern[d] = T.w(d * h).w3.real() / rho;

  DispersionResult res;
  res.a.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    const int im = i % m;
    double pv = h * dg[im];
    for (int j = 0; j < m; ++j) {
      const int d = ((j - im) % m + m) % m;
      if (d != 0) pv += h * g[j] * kern[d];
    }
    // lambda + i0 on Gamma1, lambda - i0 on Gamma2 where the kernel changes sign
    res.a[i] = std::exp(-pv / (2.0 * pi * I) - 0.5 * g[im]);
    res.a[n + i] = std::exp(pv / (2.0 * pi * I) - 0.5 * g[im]);
  }

  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, g);
  double tail = 0.0;
  for (int k = m / 4; k <= m - m / 4; ++k) tail += std::abs(spec[k]) / m;
  res.refinement_change = tail;
  res.converged = tail < tol;
  return res;
}

cplx dispersion_a_interior(const Torus& T, const ContourGrid& grid, const std::vector<cplx>& r, cplx lambda) {
  const int m = grid.n / 2;
  const auto g = dispersion_density(grid, r);
  cplx s = 0.0;
  for (int j = 0; j < m; ++j) s += grid.h * g[j] * T.w(cplx(grid.s(j), 0.0) - lambda).w3 / T.rho();
  return std::exp(-s / (2.0 * pi * I));
}

std::function<cplx(cplx)> synthetic_reflection(double c, double s, const Torus& T) {
  if (!(s > 0.0)) throw Error(ErrorKind::Domain, "direct_scattering", "width s must be positive").with("s", s);
  auto r = [c, s, T](cplx lam) -> cplx {
    if (distance_to_lattice(lam, T.params()).distance < T.tolerances().guard_radius) return 0.0;
    const auto w = T.w(lam);
    const double rho = T.rho();
    const cplx u = w.w3 / rho;
    const cplx e = -(u * u) / (s * s);
    if (e.real() < -T.tolerances().exponent_cap) return 0.0;
    return c * (w.w1 / rho) * u * std::exp(e);
  };
  const double K = T.K(), Kp = T.Kp();
  for (int j = 0; j < 100; ++j) {
    const cplx lam(-2.0 * K + 4.0 * K * (j + 0.5) / 100.0, 0.0);
    const cplx v = r(lam);
    const double scale = 1e-10 * std::max(1.0, std::abs(v));
    const double e2 = std::abs(r(lam + 2.0 * K) + v);
    const double e3 = std::abs(r(lam + cplx(0, 2.0 * Kp)) + std::conj(r(std::conj(lam))));
    if (e2 > scale || e3 > scale)
      throw Error(ErrorKind::Consistency, "direct_scattering", "synthetic reflection violates its shift symmetries")
          .with("lambda", lam)
          .with("shift_2K", e2)
          .with("shift_2iKp", e3);
  }
  if (std::abs(r(cplx(1e-3, 0))) > 1e-10)
    throw Error(ErrorKind::Consistency, "direct_scattering", "synthetic reflection is not flat at 0").with("c", c).with("s", s);
  return r;
}

}  // namespace lltorus
