#include "lltorus/pde.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "lltorus/errors.hpp"

namespace lltorus {

namespace {
using Grid = Eigen::Matrix<double, 3, Eigen::Dynamic>;
constexpr int ghosts = 2;

// Fourier extent of L1 + i L2: largest |q| whose weight exceeds tol times the peak.
double spectral_extent(const SpinField& f, double tol) {
  const auto& L = f.L();
  const std::size_t n = L.size();
  std::vector<std::complex<double>> u(n), U;
  for (std::size_t i = 0; i < n; ++i) u[i] = {L[i](0), L[i](1)};
  Eigen::FFT<double> fft;
  fft.fwd(U, u);
  double peak = 0;
  for (const auto& c : U) peak = std::max(peak, std::abs(c));
  if (peak == 0) return 0;
  const double dq = 2.0 * std::numbers::pi / (n * f.dx());
  double qmax = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const double q = dq * double(m <= n / 2 ? m : n - m);
    if (std::abs(U[m]) > tol * peak) qmax = std::max(qmax, q);
  }
  return qmax;
}

struct Stepper {
  double J[3];
  double inv12dx2;
  int n;  // interior sites; columns [ghosts, ghosts + n)

  void rhs(const Grid& L, Grid& out) const {
    for (int c = ghosts; c < ghosts + n; ++c) {
      const Eigen::Vector3d l = L.col(c);
      const Eigen::Vector3d d2 =
          (-L.col(c - 2) + 16.0 * L.col(c - 1) - 30.0 * l + 16.0 * L.col(c + 1) - L.col(c + 2)) * inv12dx2;
      const Eigen::Vector3d h = d2 + Eigen::Vector3d(J[0] * l(0), J[1] * l(1), J[2] * l(2));
      out.col(c) = l.cross(h);
    }
  }
};

Grid padded(int n) {
  Grid g(3, n + 2 * ghosts);
  g.setZero();
  for (int c = 0; c < ghosts; ++c) g(2, c) = g(2, n + ghosts + c) = 1.0;
  return g;
}

struct Integrals {
  double energy = 0;
  Vec3 momentum = Vec3::Zero();
  double tmomentum = 0;
};

Integrals integrals(const AnisotropyParams& J, const Grid& L, int n, double dx) {
  Integrals s;
  const double Jd[3] = {J.J3 - J.J1, J.J3 - J.J2, 0.0};
  for (int c = ghosts; c < ghosts + n; ++c) {
    const Eigen::Vector3d l = L.col(c);
    const Eigen::Vector3d d1 = (L.col(c - 2) - 8.0 * L.col(c - 1) + 8.0 * L.col(c + 1) - L.col(c + 2)) / (12.0 * dx);
    s.energy += 0.5 * d1.squaredNorm() + 0.5 * (Jd[0] * l(0) * l(0) + Jd[1] * l(1) * l(1));
    s.momentum += d1.cross(l);
    const double den = 1.0 + l(2);
    if (den > 1e-12) s.tmomentum += (l(0) * d1(1) - l(1) * d1(0)) / den;
  }
  s.energy *= dx;
  s.momentum *= dx;
  s.tmomentum *= dx;
  return s;
}

SpinField to_field(const Grid& L, int n, double X) {
  std::vector<double> x(n);
  std::vector<Vec3> v(n);
  const double dx = 2.0 * X / (n - 1);
  for (int i = 0; i < n; ++i) {
    x[i] = -X + i * dx;
    v[i] = L.col(ghosts + i);
  }
  return SpinField::from_samples(std::move(x), std::move(v));
}
}  // namespace

double ll_linear_frequency(const AnisotropyParams& J, double q) {
  return std::sqrt((q * q + J.J3 - J.J1) * (q * q + J.J3 - J.J2));
}

double ll_group_velocity(const AnisotropyParams& J, double q) {
  const double w = ll_linear_frequency(J, q);
  return w == 0 ? 2.0 * std::abs(q) : std::abs(q) * (2.0 * q * q + 2.0 * J.J3 - J.J1 - J.J2) / w;
}

double ll_energy(const AnisotropyParams& J, const std::vector<Vec3>& L, double dx) {
  const int n = int(L.size());
  Grid g = padded(n);
  for (int i = 0; i < n; ++i) g.col(ghosts + i) = L[i];
  return integrals(J, g, n, dx).energy;
}

SimulationState ll_evolve(const AnisotropyParams& J, const SpinField& field, double t_final,
                          const PdeControls& ctl) {
  if (!(t_final >= 0)) throw Error(ErrorKind::Domain, "pde_reference", "final time must be non-negative").with("t", t_final);
  if (!(ctl.dx > 0)) throw Error(ErrorKind::Domain, "pde_reference", "dx must be positive").with("dx", ctl.dx);
  if (ctl.dt_factor > ctl.cfl_limit || !(ctl.dt_factor > 0))
    throw Error(ErrorKind::Domain, "pde_reference", "time step violates the stability bound dt <= c dx^2")
        .with("dt_factor", ctl.dt_factor)
        .with("cfl_limit", ctl.cfl_limit);
  field.validate();

  SimulationState st;
  st.dx = ctl.dx;
  st.speed = ctl.speed > 0 ? ctl.speed : [&] {
    const double qmax = spectral_extent(field, ctl.spectrum_tol);
    double v = 0;
    for (int j = 0; j <= 200; ++j) v = std::max(v, ll_group_velocity(J, qmax * j / 200.0));
    return v;
  }();

  const int half = int(std::ceil((field.X() + st.speed * t_final + ctl.margin) / ctl.dx));
  const int n = 2 * half + 1;
  const double X = half * ctl.dx;
  Grid L = padded(n);
  for (int i = 0; i < n; ++i) {
    const double x = -X + i * ctl.dx;
    Vec3 v = std::abs(x) <= field.X() ? field.at(x) : Vec3(0, 0, 1);
    L.col(ghosts + i) = v.normalized();
  }

  const long steps = t_final > 0 ? long(std::ceil(t_final / (ctl.dt_factor * ctl.dx * ctl.dx))) : 0;
  const double dt = steps > 0 ? t_final / steps : ctl.dt_factor * ctl.dx * ctl.dx;
  st.dt = dt;
  const Stepper S{{J.J1, J.J2, J.J3}, 1.0 / (12.0 * ctl.dx * ctl.dx), n};

  const Integrals I0 = integrals(J, L, n, ctl.dx);
  st.monitors.energy0 = I0.energy;
  st.monitors.momentum0 = I0.momentum;
  st.monitors.tmomentum0 = I0.tmomentum;

  std::vector<std::pair<long, double>> marks;
  for (double tc : ctl.checkpoints)
    if (tc >= 0 && tc <= t_final) marks.push_back({dt > 0 ? std::lround(tc / dt) : 0, tc});
  std::sort(marks.begin(), marks.end());
  std::size_t next_mark = 0;
  auto emit = [&](long s) {
    while (next_mark < marks.size() && marks[next_mark].first == s) {
      st.checkpoints.push_back({s * dt, to_field(L, n, X)});
      ++next_mark;
    }
  };
  emit(0);

  // stage derivatives vanish on the ghost columns, so the background stays fixed
  const Grid zero = Grid::Zero(3, n + 2 * ghosts);
  Grid k1 = zero, k2 = zero, k3 = zero, k4 = zero, tmp = L;
  for (long s = 1; s <= steps; ++s) {
    S.rhs(L, k1);
    tmp = L + 0.5 * dt * k1;
    S.rhs(tmp, k2);
    tmp = L + 0.5 * dt * k2;
    S.rhs(tmp, k3);
    tmp = L + dt * k3;
    S.rhs(tmp, k4);
    L += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    double defect = 0;
    for (int c = ghosts; c < ghosts + n; ++c) {
      const double nn = L.col(c).squaredNorm();
      defect = std::max(defect, std::abs(nn - 1.0));
      L.col(c) /= std::sqrt(nn);
    }
    st.monitors.max_norm_defect = std::max(st.monitors.max_norm_defect, defect);
    if (!(defect <= ctl.norm_bound))
      throw Error(ErrorKind::Integration, "pde_reference", "norm drift exceeds the bound before projection")
          .with("t", s * dt)
          .with("defect", defect)
          .with("bound", ctl.norm_bound);
    emit(s);
  }

  const Integrals I1 = integrals(J, L, n, ctl.dx);
  PdeMonitors& m = st.monitors;
  m.energy = I1.energy;
  m.momentum = I1.momentum;
  m.tmomentum = I1.tmomentum;
  if (t_final > 0) {
    m.energy_drift_rate = std::abs(m.energy - m.energy0) / t_final;
    m.momentum_drift_rate = (m.momentum - m.momentum0).cwiseAbs().maxCoeff() / t_final;
    m.tmomentum_drift_rate = std::abs(m.tmomentum - m.tmomentum0) / t_final;
  }
  m.energy_within_bound = m.energy_drift_rate <= ctl.energy_bound;
  st.t = t_final;
  st.steps = steps;
  st.field = to_field(L, n, X);
  return st;
}

}  // namespace lltorus
