#include "lltorus/compare.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "lltorus/errors.hpp"

namespace lltorus {

ReflectionFn reflection_interpolant(const ContourGrid& grid, const std::vector<cplx>& r_nodes) {
  const int n = grid.n;
  if (int(r_nodes.size()) != 2 * n)
    throw Error(ErrorKind::Config, "cli_runner", "reflection samples do not match the grid").with("size", double(r_nodes.size()));
  auto coef = std::make_shared<std::vector<std::vector<cplx>>>(2);
  Eigen::FFT<double> fft;
  for (int line = 0; line < 2; ++line) {
    std::vector<cplx> v(r_nodes.begin() + line * n, r_nodes.begin() + (line + 1) * n), c;
    fft.fwd(c, v);
    for (auto& z : c) z /= double(n);
    (*coef)[line] = std::move(c);
  }
  const double K = grid.K, Kp = grid.Kp, h = grid.h;
  return [coef, n, K, Kp, h](cplx lambda) -> cplx {
    int line;
    if (std::abs(lambda.imag()) < 1e-12) line = 0;
    else if (std::abs(lambda.imag() - 2.0 * Kp) < 1e-12) line = 1;
    else throw Error(ErrorKind::Domain, "cli_runner", "sampled reflection is known on the contour only").with("lambda", lambda);
    // position in node units from the first node s_0 = -2K + h/2
    const double u = (lambda.real() + 2.0 * K - 0.5 * h) / h;
    const auto& c = (*coef)[line];
    cplx sum = 0.0;
    for (int m = 0; m < n; ++m) {
      if (2 * m == n) {
        sum += c[m] * std::cos(std::numbers::pi * u);
        continue;
      }
      const int k = m <= n / 2 ? m : m - n;
      sum += c[m] * std::exp(cplx(0.0, 2.0 * std::numbers::pi * k * u / n));
    }
    return sum;
  };
}

double LogLogFit::at(double x) const { return std::exp(intercept + slope * std::log(x)); }

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::Domain, "cli_runner", "log-log fit needs at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0))
      throw Error(ErrorKind::Domain, "cli_runner", "log-log fit needs positive data").with("x", x[i]).with("y", y[i]);
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  LogLogFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

RhpComparison compare_rhp_asymptotics(const Torus& T, const ReflectionFn& r, double kappa,
                                      const std::vector<double>& t_list, const RhpSettings& s) {
  RhpComparison out;
  out.kappa = kappa;
  const AsymptoticInputs in = make_inputs(T, kappa, r);
  for (double t : t_list) {
    const MeshDescriptor m = resolve_mesh(T, r, t, kappa, s.points_per_wavelength, s.min_n);
    const ContourSystem cs = make_contour_system(T, m.n);
    const ReflectionSamples rs = sample_reflection(cs.grid, r);
    ComparisonRow row;
    row.t = t;
    row.x = kappa * t;
    row.nodes = m.n;
    const PointResult p = rhp_point(T, cs, rs, row.x, t, s.solver);
    row.rhp = p.L;
    row.jump_residual = p.jump_residual;
    row.asym = asymptotic_L(row.x, t, in);
    row.residual = {std::abs(p.L.L1 - row.asym.L1), std::abs(p.L.L2 - row.asym.L2), std::abs(p.L.L3 - row.asym.L3)};
    row.sup = *std::max_element(row.residual.begin(), row.residual.end());
    out.rows.push_back(row);
  }
  if (out.rows.size() >= 2) {
    std::vector<double> ts, sup;
    std::array<std::vector<double>, 3> comp;
    for (const auto& row : out.rows) {
      ts.push_back(row.t);
      sup.push_back(row.sup);
      for (int j = 0; j < 3; ++j) comp[j].push_back(row.residual[j]);
    }
    for (int j = 0; j < 3; ++j) out.fits[j] = fit_loglog(ts, comp[j]);
    out.sup_fit = fit_loglog(ts, sup);
  }
  return out;
}

SpinField field_from_reflection(const Torus& T, const ReflectionFn& r, double X, double dx, const RhpSettings& s) {
  const MeshDescriptor m = resolve_mesh(T, r, 0.0, X, s.points_per_wavelength, s.min_n);
  const ContourSystem cs = make_contour_system(T, m.n);
  const ReflectionSamples rs = sample_reflection(cs.grid, r);
  const int count = int(std::lround(2.0 * X / dx)) + 1;
  std::vector<double> xs(count);
  std::vector<Vec3> L(count);
  for (int i = 0; i < count; ++i) {
    xs[i] = -X + dx * i;
    if (i == 0 || i == count - 1) {
      L[i] = Vec3(0, 0, 1);
      continue;
    }
    const PointResult p = rhp_point(T, cs, rs, xs[i], 0.0, s.solver);
    L[i] = Vec3(p.L.L1, p.L.L2, p.L.L3).normalized();
  }
  return SpinField::from_samples(std::move(xs), std::move(L));
}

PdeComparison compare_pde_asymptotics(const Torus& T, const ReflectionFn& r, const SpinField& initial, double t,
                                      const std::vector<double>& kappas, const PdeControls& controls) {
  PdeComparison out;
  out.t = t;
  out.state = ll_evolve(T.params(), initial, t, controls);
  for (double kappa : kappas) {
    PdeComparisonRow row;
    row.x = kappa * t;
    row.pde = out.state.field.at(row.x);
    row.asym = asymptotic_L(row.x, t, make_inputs(T, kappa, r));
    row.sup = std::max({std::abs(row.pde(0) - row.asym.L1), std::abs(row.pde(1) - row.asym.L2),
                        std::abs(row.pde(2) - row.asym.L3)});
    out.sup = std::max(out.sup, row.sup);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace lltorus
