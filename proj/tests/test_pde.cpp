#include <doctest.h>

#include <cmath>
#include <vector>

#include "lltorus/errors.hpp"
#include "lltorus/pde.hpp"

using namespace lltorus;

namespace {
const AnisotropyParams J = AnisotropyParams::from_modulus(0.5);

// L1 + i L2 = A exp(-x^2/w^2) exp(i q x)
SpinField chirped_pulse(double A, double w, double q, double X, std::size_t n) {
  return SpinField::from_function(
      [=](double x) {
        const double g = A * std::exp(-x * x / (w * w));
        return Vec3(g * std::cos(q * x), g * std::sin(q * x), std::sqrt(1.0 - g * g));
      },
      X, n);
}

double max_dev(const SpinField& a, const SpinField& b, double xmax) {
  double e = 0;
  for (double x : a.x())
    if (std::abs(x) <= xmax) e = std::max(e, (a.at(x) - b.at(x)).cwiseAbs().maxCoeff());
  return e;
}
}  // namespace

TEST_CASE("background is a fixed point") {
  const SpinField f = SpinField::from_function([](double) { return Vec3(0, 0, 1); }, 5.0, 101);
  PdeControls c;
  c.dx = 0.1;
  const SimulationState s = ll_evolve(J, f, 1.0, c);
  CHECK(s.steps == 500);
  for (const Vec3& v : s.field.L()) CHECK(v == Vec3(0, 0, 1));
}

TEST_CASE("linear dispersion about the background") {
  for (double q : {0.5, 1.0, 2.0}) {
    CAPTURE(q);
    const double eps = 1e-4, W = 25.0;
    // l1 = eps cos(q x) under a wide envelope: a standing wave whose centre value is eps cos(omega t)
    const SpinField f = SpinField::from_function(
        [=](double x) {
          const double l1 = eps * std::cos(q * x) * std::exp(-x * x / (W * W));
          return Vec3(l1, 0.0, std::sqrt(1.0 - l1 * l1));
        },
        100.0, 2001);
    PdeControls c;
    c.dx = 0.05;
    CHECK(q * c.dx < 0.2);
    c.speed = 1.0;
    c.margin = 0.0;
    const double omega = ll_linear_frequency(J, q);
    const double period = 2.0 * M_PI / omega;
    const double tf = 5.0 * period;
    for (int j = 0; j <= 400; ++j) c.checkpoints.push_back(tf * j / 400.0);
    const SimulationState s = ll_evolve(J, f, tf, c);
    std::vector<double> ts, ys;
    for (const auto& [t, fld] : s.checkpoints) {
      ts.push_back(t);
      ys.push_back(fld.at(0.0)(0));
    }
    // zero crossings of L1(0, t)
    std::vector<double> zeros;
    for (std::size_t i = 1; i < ys.size(); ++i)
      if ((ys[i - 1] < 0) != (ys[i] < 0)) zeros.push_back(ts[i - 1] - ys[i - 1] * (ts[i] - ts[i - 1]) / (ys[i] - ys[i - 1]));
    REQUIRE(zeros.size() >= 8);
    const double measured = M_PI * (zeros.size() - 1) / (zeros.back() - zeros.front());
    CHECK(std::abs(measured / omega - 1.0) < 0.01);
  }
}

TEST_CASE("norm preservation over 1e4 steps") {
  const SpinField f = chirped_pulse(0.5, 2.0, 1.0, 12.0, 481);
  PdeControls c;
  c.dx = 0.1;
  const double tf = 1e4 * c.dt_factor * c.dx * c.dx;
  const SimulationState s = ll_evolve(J, f, tf, c);
  CHECK(s.steps == 10000);
  double worst = 0;
  for (const Vec3& v : s.field.L()) worst = std::max(worst, std::abs(v.squaredNorm() - 1.0));
  CHECK(worst < 1e-12);
  CHECK(s.monitors.max_norm_defect < 1e-10);
  CHECK(s.monitors.energy_drift_rate < 1e-6);
  CHECK(s.monitors.energy_within_bound);
}

TEST_CASE("translation momentum is conserved, the integral of dL/dx x L is not") {
  PdeControls c;
  c.dx = 0.05;
  const SimulationState a = ll_evolve(J, chirped_pulse(0.1, 2.0, 1.5, 12.0, 481), 2.0, c);
  CHECK(std::abs(a.monitors.tmomentum0) > 1e-2);
  CHECK(a.monitors.tmomentum_drift_rate < 1e-6);
  // the drift of sum (dL/dx x L) dx is a property of the flow: it survives grid refinement
  c.dx = 0.1;
  const SimulationState b = ll_evolve(J, chirped_pulse(0.1, 2.0, 1.5, 12.0, 481), 2.0, c);
  CHECK(a.monitors.momentum_drift_rate > 1e-4);
  CHECK(std::abs(a.monitors.momentum_drift_rate / b.monitors.momentum_drift_rate - 1.0) < 1e-2);
}

TEST_CASE("grid refinement order") {
  const SpinField f = chirped_pulse(0.3, 2.0, 1.0, 12.0, 2401);
  std::vector<SimulationState> runs;
  for (double dx : {0.2, 0.1, 0.05}) {
    PdeControls c;
    c.dx = dx;
    c.speed = 4.0;
    c.margin = 4.0;  // X = 12 + 4 + 4 = 20 on every grid
    runs.push_back(ll_evolve(J, f, 1.0, c));
  }
  // coarse nodes are shared by all three grids
  const double c1 = max_dev(runs[0].field, runs[1].field, 20.0);
  const double c2 = max_dev(runs[1].field, runs[2].field, 20.0);
  MESSAGE("refinement differences ", c1, " ", c2);
  CHECK(std::log2(c1 / c2) >= 3.5);
}

TEST_CASE("errors") {
  const SpinField f = chirped_pulse(0.3, 2.0, 1.0, 12.0, 481);
  PdeControls c;
  c.dx = 0.1;
  c.dt_factor = 0.6;
  CHECK_THROWS_AS(ll_evolve(J, f, 0.1, c), Error);
  try {
    ll_evolve(J, f, 0.1, c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  c.dt_factor = 0.2;
  c.norm_bound = 1e-30;
  try {
    ll_evolve(J, f, 0.1, c);
    FAIL("expected a norm drift error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integration);
  }
}

TEST_CASE("group velocity and domain growth") {
  // omega'(q) by central difference
  for (double q : {0.3, 1.0, 3.0}) {
    const double h = 1e-5;
    const double d = (ll_linear_frequency(J, q + h) - ll_linear_frequency(J, q - h)) / (2 * h);
    CHECK(ll_group_velocity(J, q) == doctest::Approx(d).epsilon(1e-8));
  }
  const SpinField f = chirped_pulse(0.3, 2.0, 1.0, 12.0, 481);
  PdeControls c;
  c.dx = 0.1;
  const SimulationState s0 = ll_evolve(J, f, 0.5, c), s1 = ll_evolve(J, f, 1.0, c);
  CHECK(s0.speed > 0);
  CHECK(std::abs(s1.field.X() - s0.field.X() - 0.5 * s0.speed) <= c.dx + 1e-9);
}
