#include "lltorus/rhp.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/IterativeSolvers>

#include "lltorus/errors.hpp"
#include "lltorus/parallel.hpp"
#include "lltorus/spectral.hpp"

namespace lltorus {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
const cplx inv2pii = 1.0 / (2.0 * pi * I);

using CVec = std::vector<cplx>;

CVec fft_fwd(const CVec& v) {
  thread_local Eigen::FFT<double> fft;
  CVec out;
  fft.fwd(out, v);
  return out;
}
CVec fft_inv(const CVec& v) {
  thread_local Eigen::FFT<double> fft;
  CVec out;
  fft.inv(out, v);
  return out;
}

// signed wavenumber of FFT bin m, Nyquist mapped to 0
double wavenumber(int m, int n) {
  if (2 * m == n) return 0.0;
  return m < n / 2 ? m : m - n;
}

// sym[m] = sum_d k[d] exp(2 pi i d m / n)
CVec symbol_of(const CVec& k) {
  const int n = int(k.size());
  CVec rev(n);
  for (int d = 0; d < n; ++d) rev[d] = k[(n - d) % n];
  return fft_fwd(rev);
}
}  // namespace

std::vector<cplx> half_shift(const std::vector<cplx>& v) {
  const int n = int(v.size());
  CVec spec = fft_fwd(v);
  for (int m = 0; m < n; ++m) {
    if (2 * m == n) {
      // split the Nyquist mode symmetrically: cos(pi (j + 1/2)) vanishes
      spec[m] = 0.0;
      continue;
    }
    spec[m] *= std::exp(I * (pi * wavenumber(m, n) / n));
  }
  return fft_inv(spec);
}

ReflectionSamples sample_reflection(const ContourGrid& grid, const std::function<cplx(cplx)>& r) {
  ReflectionSamples s;
  const int n = grid.n;
  s.nodes.resize(2 * n);
  s.mid.resize(2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    s.nodes[j] = r(grid.nodes[j]);
    s.mid[j] = r(grid.nodes[j] + 0.5 * grid.h);
  }
  return s;
}

ReflectionSamples interpolate_reflection(const ContourGrid& grid, const std::vector<cplx>& r_nodes) {
  const int n = grid.n;
  if (int(r_nodes.size()) != 2 * n)
    throw Error(ErrorKind::Config, "rhp_torus", "reflection samples do not match the grid").with("size", double(r_nodes.size()));
  ReflectionSamples s;
  s.nodes = r_nodes;
  s.mid.resize(2 * n);
  for (int line = 0; line < 2; ++line) {
    CVec v(r_nodes.begin() + line * n, r_nodes.begin() + (line + 1) * n);
    const CVec m = half_shift(v);
    std::copy(m.begin(), m.end(), s.mid.begin() + line * n);
  }
  return s;
}

double ContourSystem::length() const {
  double s = 0.0;
  for (cplx w : weights) s += std::abs(w);
  return s;
}

ContourSystem make_contour_system(const Torus& T, int n) {
  ContourSystem cs;
  cs.grid = ContourGrid::make(T, n);
  cs.weights.resize(2 * n);
  for (int j = 0; j < n; ++j) {
    cs.weights[j] = cs.grid.h;
    cs.weights[n + j] = -cs.grid.h;
  }
  cs.mesh.n = n;
  cs.mesh.h = cs.grid.h;
  cs.mesh.density = 1.0 / cs.grid.h;
  return cs;
}

MeshDescriptor resolve_mesh(const Torus& T, const std::function<cplx(cplx)>& r, double t, double kappa,
                            double points_per_wavelength, int min_n, double support_tol) {
  // scan the support of r on Gamma1 (Gamma2 carries the same |r| and |p'|)
  const int scan = 20000;
  const double K = T.K();
  double max_rate = 0.0, max_dp = 0.0;
  for (int j = 0; j < scan; ++j) {
    const double s = -2.0 * K + 4.0 * K * (j + 0.5) / scan;
    if (std::abs(r(s)) <= support_tol) continue;
    const auto w = T.w(s);
    // d/ds of the jump phase: 2x w3' = -2x w1 w2 / rho at t = 0, 2t p' for t > 0
    double rate;
    if (t > 0.0) {
      const double dp = std::abs(dp_dlambda(T, s, kappa));
      max_dp = std::max(max_dp, dp);
      rate = 2.0 * t * dp;
    } else {
      rate = 2.0 * std::abs(kappa) * std::abs(w.w1 * w.w2) / T.rho();
    }
    max_rate = std::max(max_rate, rate);
  }
  MeshDescriptor m;
  m.t = t;
  m.max_dp = max_dp;
  m.required = points_per_wavelength * max_rate / (2.0 * pi);
  int n = std::max(8, min_n);
  while (n / (4.0 * K) < m.required) n *= 2;
  m.n = n;
  m.h = 4.0 * K / n;
  m.density = 1.0 / m.h;
  return m;
}

ComplexMatrix2 jump_matrix(cplx r, double phase) {
  const cplx e = std::exp(I * phase);
  ComplexMatrix2 G;
  G << 1.0 + std::norm(r), std::conj(r * e), r * e, 1.0;
  return G;
}

Jump build_jump(const Torus& T, const ContourGrid& grid, const ReflectionSamples& r, double x, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::Domain, "rhp_torus", "time must be nonnegative").with("t", t);
  const int m = 2 * grid.n;
  Jump J;
  J.x = x;
  J.t = t;
  J.nodes.assign(m, pauli::id());
  J.mid.assign(m, pauli::id());
  const double cap = T.tolerances().exponent_cap;
  auto phase_at = [&](cplx lam) {
    const auto w = T.w(lam);
    const cplx ph = t > 0.0 ? 2.0 * t * ((x / t) * w.w3 - 2.0 * w.w1 * w.w2) : 2.0 * x * w.w3;
    if (std::abs(ph.imag()) > cap)
      throw Error(ErrorKind::Overflow, "rhp_torus", "jump exponent overflow; node off the real contours")
          .with("lambda", lam)
          .with("im_phase", ph.imag());
    return ph.real();
  };
  // r vanishes at the lattice points, which sit at midpoints of the grid
  auto on_lattice = [&](cplx lam) { return distance_to_lattice(lam, T.params()).distance < T.tolerances().guard_radius; };
  for (int j = 0; j < m; ++j) {
    const cplx mid = grid.nodes[j] + 0.5 * grid.h;
    if (r.nodes[j] != 0.0) J.nodes[j] = jump_matrix(r.nodes[j], phase_at(grid.nodes[j]));
    if (r.mid[j] != 0.0 && !on_lattice(mid)) J.mid[j] = jump_matrix(r.mid[j], phase_at(mid));
  }
  return J;
}

namespace {

// The discretized Cauchy operator F -> sum_j W_ij F_j on 2n nodes: four
// circulant blocks plus the rank-two part from the mu-only and lambda-only
// terms of the kernel.
struct CauchyOperator {
  int n = 0;
  std::array<CVec, 4> sym;  // 11, 12, 21, 22
  CVec Aw;                  // w_j A(mu_j)
  CVec w;                   // w_j
  CVec B;                   // B(lambda_i) at the targets

  CVec apply(const CVec& F) const {
    const CVec F1(F.begin(), F.begin() + n), F2(F.begin() + n, F.end());
    const CVec h1 = fft_fwd(F1), h2 = fft_fwd(F2);
    CVec o1(n), o2(n);
    for (int m = 0; m < n; ++m) {
      o1[m] = sym[0][m] * h1[m] + sym[1][m] * h2[m];
      o2[m] = sym[2][m] * h1[m] + sym[3][m] * h2[m];
    }
    const CVec r1 = fft_inv(o1), r2 = fft_inv(o2);
    cplx sa = 0.0, sw = 0.0;
    for (int j = 0; j < 2 * n; ++j) {
      sa += Aw[j] * F[j];
      sw += w[j] * F[j];
    }
    CVec out(2 * n);
    for (int i = 0; i < n; ++i) {
      out[i] = r1[i] + sa + B[i] * sw;
      out[n + i] = r2[i] + sa + B[n + i] * sw;
    }
    return out;
  }
};

cplx B_of(const Torus& T, cplx lambda) {
  const double c = T.eta1().real() / (2.0 * T.K());
  return -c * lambda + T.zeta(lambda - cplx(T.K(), T.Kp())) + T.zeta(cplx(T.K(), 0.0));
}

// node_targets: targets at the nodes (singular self terms handled by the
// trapezoid-plus-derivative rule); otherwise targets at midpoints.
CauchyOperator make_operator(const Torus& T, const ContourGrid& g, bool node_targets) {
  const int n = g.n;
  const double h = g.h, Kp = g.Kp;
  CauchyOperator op;
  op.n = n;
  const double off = node_targets ? 0.0 : -0.5;
  CVec k11(n), k12(n), k21(n);
  for (int d = 0; d < n; ++d) {
    const double s = (d + off) * h;
    k11[d] = (node_targets && d == 0) ? cplx(0.0) : h * T.zeta_periodic(s);
    k12[d] = -h * T.zeta_periodic(cplx(s, 2.0 * Kp));
    k21[d] = h * T.zeta_periodic(cplx(s, -2.0 * Kp));
  }
  op.sym[0] = symbol_of(k11);
  op.sym[1] = symbol_of(k12);
  op.sym[2] = symbol_of(k21);
  op.sym[3] = op.sym[0];
  for (int m = 0; m < n; ++m) {
    if (node_targets) op.sym[0][m] += h * I * (2.0 * pi * wavenumber(m, n) / (4.0 * g.K));
    op.sym[3][m] = -op.sym[0][m];
  }
  const double c = T.eta1().real() / (2.0 * T.K());
  op.Aw.resize(2 * n);
  op.w.resize(2 * n);
  op.B.resize(2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    const cplx mu = g.nodes[j];
    op.w[j] = j < n ? h : -h;
    op.Aw[j] = op.w[j] * (c * mu - T.zeta(mu - cplx(0.0, Kp)));
    const cplx target = node_targets ? mu : mu + 0.5 * h;
    op.B[j] = B_of(T, target);
  }
  return op;
}

// y = u + F/2 - (1/2 pi i) W F with F_b = sum_a u_a E_ab, u = (u_0, u_1).
struct SystemOperator {
  const CauchyOperator* op;
  const std::vector<ComplexMatrix2>* E;
  int m;  // 2n

  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const {
    Eigen::VectorXcd y(2 * m);
    for (int b = 0; b < 2; ++b) {
      CVec F(m);
      for (int j = 0; j < m; ++j) F[j] = u[j] * (*E)[j](0, b) + u[m + j] * (*E)[j](1, b);
      const CVec WF = op->apply(F);
      for (int j = 0; j < m; ++j) y[b * m + j] = u[b * m + j] + 0.5 * F[j] - inv2pii * WF[j];
    }
    return y;
  }
};

}  // namespace
}  // namespace lltorus

// Matrix-free wrapper so Eigen's GMRES can drive the FFT operator.
namespace lltorus::detail {
class FreeOperator;
}
namespace Eigen::internal {
template <>
struct traits<lltorus::detail::FreeOperator> : public traits<Eigen::SparseMatrix<std::complex<double>>> {};
}  // namespace Eigen::internal

namespace lltorus::detail {
class FreeOperator : public Eigen::EigenBase<FreeOperator> {
public:
  using Scalar = std::complex<double>;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  explicit FreeOperator(const SystemOperator& s) : sys(&s) {}
  Eigen::Index rows() const { return 2 * sys->m; }
  Eigen::Index cols() const { return 2 * sys->m; }
  template <typename Rhs>
  Eigen::Product<FreeOperator, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<FreeOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }
  const SystemOperator* sys;
};
}  // namespace lltorus::detail

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<lltorus::detail::FreeOperator, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<lltorus::detail::FreeOperator, Rhs,
                                generic_product_impl<lltorus::detail::FreeOperator, Rhs>> {
  using Scalar = typename Product<lltorus::detail::FreeOperator, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const lltorus::detail::FreeOperator& lhs, const Rhs& rhs, const Scalar& alpha) {
    dst.noalias() += alpha * lhs.sys->apply(rhs);
  }
};
}  // namespace Eigen::internal

namespace lltorus {

RHPSolution::RHPSolution(const Torus& T, const ContourSystem& cs, const Jump& jump, const SolverOptions& opt)
    : T_(T), cs_(cs), jump_(jump) {
  const int n = cs_.grid.n, m = 2 * n;
  std::vector<ComplexMatrix2> E(m);
  double maxE = 0.0;
  for (int j = 0; j < m; ++j) {
    E[j] = jump.nodes[j] - pauli::id();
    maxE = std::max(maxE, max_abs(E[j]));
  }
  const auto op = make_operator(T_, cs_.grid, true);
  const SystemOperator sys{&op, &E, m};

  SolverMethod method = opt.method;
  if (method == SolverMethod::Auto) method = n <= opt.dense_max_n ? SolverMethod::Dense : SolverMethod::Gmres;
  report_.method = method;

  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2 * m, 2);
  rhs.col(0).head(m).setOnes();
  rhs.col(1).tail(m).setOnes();
  Eigen::MatrixXcd U(2 * m, 2);

  if (maxE == 0.0) {
    U = rhs;
  } else if (method == SolverMethod::Dense) {
    Eigen::MatrixXcd A(2 * m, 2 * m);
    parallel_for(std::size_t(2 * m), [&](std::size_t col) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(2 * m);
      e[Eigen::Index(col)] = 1.0;
      A.col(Eigen::Index(col)) = sys.apply(e);
    });
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    report_.rcond = lu.rcond();
    if (!(report_.rcond > 1e-14))
      throw Error(ErrorKind::Singular, "rhp_torus", "singular integral equation is numerically singular")
          .with("rcond", report_.rcond)
          .with("x", jump.x)
          .with("t", jump.t);
    U = lu.solve(rhs);
    U += lu.solve(rhs - A * U);  // one step of iterative refinement
  } else {
    detail::FreeOperator A(sys);
    Eigen::GMRES<detail::FreeOperator, Eigen::IdentityPreconditioner> gmres;
    gmres.setTolerance(opt.gmres_tol);
    gmres.set_restart(opt.gmres_restart);
    gmres.setMaxIterations(opt.gmres_max_iter);
    gmres.compute(A);
    for (int k = 0; k < 2; ++k) {
      U.col(k) = gmres.solveWithGuess(rhs.col(k), rhs.col(k));
      report_.iterations += int(gmres.iterations());
    }
  }

  double res = 0.0;
  for (int k = 0; k < 2; ++k) res = std::max(res, (sys.apply(U.col(k)) - rhs.col(k)).cwiseAbs().maxCoeff());
  report_.residual = res;
  if (!(res < opt.residual_tol))
    throw Error(ErrorKind::Integration, "rhp_torus", "singular integral equation solve did not converge")
        .with("residual", res)
        .with("iterations", double(report_.iterations))
        .with("x", jump.x)
        .with("t", jump.t);

  chi_.resize(m);
  F_.resize(m);
  double maxd = 0.0;
  for (int j = 0; j < m; ++j) {
    chi_[j] << U(j, 0), U(m + j, 0), U(j, 1), U(m + j, 1);
    F_[j] = chi_[j] * E[j];
    maxd = std::max(maxd, max_abs(chi_[j] - pauli::id()));
  }
  report_.small_norm_K = maxE > 0.0 ? maxd / maxE : 0.0;

  Amu_.resize(m);
  for (int j = 0; j < m; ++j) Amu_[j] = -T_.zeta(cs_.grid.nodes[j] - cplx(0.0, T_.Kp()));
}

ComplexMatrix2 RHPSolution::phi(cplx lambda) const {
  const int n = cs_.grid.n, m = 2 * n;
  const double h = cs_.grid.h, Kp = T_.Kp();
  // distance to the nearest contour line (lines at Im = 0, 2K' mod 4K')
  const double y = lambda.imag() - 4.0 * Kp * std::floor(lambda.imag() / (4.0 * Kp));
  const double dy[3] = {y, std::abs(y - 2.0 * Kp), 4.0 * Kp - y};
  const double d = std::min({dy[0], dy[1], dy[2]});
  const double standoff = 4.0 * h;
  if (d < standoff) {
    const int line = (dy[1] < std::min(dy[0], dy[2])) ? 1 : 0;
    const double K = T_.K();
    const double x = lambda.real() - 4.0 * K * std::floor((lambda.real() + 2.0 * K) / (4.0 * K));
    const double u = (x + 2.0 * K) / h;
    const int k = int(std::lround(u));
    double local = 0.0;
    if (d < 1e-12 && std::abs(u - k) < 1e-9) {
      // at a midpoint the sum is the principal value, the mean of the two
      // boundary values; it is the value of Phi where the density vanishes
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          CVec f(n);
          for (int j = 0; j < n; ++j) f[j] = F_[line * n + j](a, b);
          local = std::max(local, std::abs(half_shift(f)[((k - 1) % n + n) % n]));
        }
    } else {
      for (int o = -6; o <= 6; ++o) local = std::max(local, max_abs(F_[line * n + ((k + o) % n + n) % n]));
    }
    if (local > T_.tolerances().contour_density)
      throw Error(ErrorKind::Range, "rhp_torus", "evaluation point too close to the contour")
          .with("lambda", lambda)
          .with("distance", d)
          .with("required_standoff", standoff)
          .with("local_density", local);
  }
  const cplx Bl = T_.zeta(lambda - cplx(T_.K(), Kp)) + T_.zeta(cplx(T_.K(), 0.0));
  ComplexMatrix2 S = ComplexMatrix2::Zero();
  for (int j = 0; j < m; ++j) {
    if (F_[j].isZero(0.0)) continue;
    const cplx C = T_.zeta(cs_.grid.nodes[j] - lambda) + Amu_[j] + Bl;
    S += (cs_.weights[j] * C) * F_[j];
  }
  return pauli::id() + inv2pii * S;
}

void RHPSolution::midpoint_boundary_values(std::vector<ComplexMatrix2>& plus, std::vector<ComplexMatrix2>& minus) const {
  const int n = cs_.grid.n, m = 2 * n;
  const auto op = make_operator(T_, cs_.grid, false);
  plus.assign(m, ComplexMatrix2::Zero());
  minus.assign(m, ComplexMatrix2::Zero());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CVec F(m);
      for (int j = 0; j < m; ++j) F[j] = F_[j](a, b);
      const CVec PV = op.apply(F);
      CVec fmid(m);
      for (int line = 0; line < 2; ++line) {
        const CVec s = half_shift(CVec(F.begin() + line * n, F.begin() + (line + 1) * n));
        std::copy(s.begin(), s.end(), fmid.begin() + line * n);
      }
      for (int j = 0; j < m; ++j) {
        const cplx base = (a == b ? 1.0 : 0.0) + inv2pii * PV[j];
        plus[j](a, b) = base + 0.5 * fmid[j];
        minus[j](a, b) = base - 0.5 * fmid[j];
      }
    }
}

double RHPSolution::jump_residual() const {
  std::vector<ComplexMatrix2> plus, minus;
  midpoint_boundary_values(plus, minus);
  double res = 0.0;
  for (std::size_t j = 0; j < plus.size(); ++j) res = std::max(res, max_abs(plus[j] - minus[j] * jump_.mid[j]));
  return res;
}

ComplexMatrix2 RHPSolution::auxiliary_residue() const {
  ComplexMatrix2 S = ComplexMatrix2::Zero();
  for (std::size_t j = 0; j < F_.size(); ++j) S += cs_.weights[j] * F_[j];
  return inv2pii * S;
}

namespace {
ComplexMatrix2 numerator(const RHPSolution& s, cplx lambda, double K, double Kp) {
  return s.phi(lambda) + conj_by(3, s.phi(lambda + 2.0 * K)) + conj_by(1, s.phi(lambda + cplx(0.0, 2.0 * Kp))) +
         conj_by(2, s.phi(lambda + cplx(2.0 * K, 2.0 * Kp)));
}
}  // namespace

cplx RHPSolution::symmetrization_det(cplx lambda) const { return numerator(*this, lambda, T_.K(), T_.Kp()).determinant(); }

ComplexMatrix2 RHPSolution::Y(cplx lambda, double det_floor) const {
  const ComplexMatrix2 N = numerator(*this, lambda, T_.K(), T_.Kp());
  const cplx c = N.determinant();
  if (std::abs(c) < det_floor)
    throw Error(ErrorKind::Singular, "rhp_torus", "symmetrization determinant vanishes").with("lambda", lambda).with("c", c);
  return N / std::sqrt(c);
}

LVector reconstruct_L(const ComplexMatrix2& Y0, double norm_tol) {
  const ComplexMatrix2 M = Y0 * pauli::s3() * checked_inverse(Y0, 1e-300);
  const auto c = pauli_decompose(M);
  LVector L;
  L.L1 = c[1].real();
  L.L2 = c[2].real();
  L.L3 = c[3].real();
  L.im_residual = std::max({std::abs(c[1].imag()), std::abs(c[2].imag()), std::abs(c[3].imag())});
  const double norm = L.L1 * L.L1 + L.L2 * L.L2 + L.L3 * L.L3;
  if (std::abs(norm - 1.0) > norm_tol)
    throw Error(ErrorKind::Consistency, "rhp_torus", "reconstructed L is not a unit vector").with("norm2", norm);
  return L;
}

PointResult rhp_point(const Torus& T, const ContourSystem& cs, const ReflectionSamples& r, double x, double t,
                      const SolverOptions& opt) {
  const Jump J = build_jump(T, cs.grid, r, x, t);
  const RHPSolution sol(T, cs, J, opt);
  PointResult out;
  out.x = x;
  out.t = t;
  out.report = sol.report();
  out.L = reconstruct_L(sol.Y(0.0));
  const cplx c0 = sol.symmetrization_det(0.0);
  const double K = T.K(), Kp = T.Kp();
  for (cplx probe : {cplx(0.37 * K, 0.5 * Kp), cplx(-1.21 * K, 1.3 * Kp), cplx(0.8 * K, -0.7 * Kp)})
    out.det_residual = std::max(out.det_residual, std::abs(sol.symmetrization_det(probe) / c0 - 1.0));
  out.jump_residual = sol.jump_residual();
  return out;
}

SpinField ist_roundtrip(const Torus& T, const SpinField& field, int n, double xmax, double dx_out, const SolverOptions& opt) {
  const auto data = compute_scattering(T, field, n);
  const auto cs = make_contour_system(T, n);
  const auto r = interpolate_reflection(cs.grid, data.r);
  const int count = int(std::lround(2.0 * xmax / dx_out)) + 1;
  std::vector<double> xs(count);
  std::vector<Vec3> L(count);
  for (int i = 0; i < count; ++i) xs[i] = -xmax + dx_out * i;
  for (int i = 0; i < count; ++i) {
    const Jump J = build_jump(T, cs.grid, r, xs[i], 0.0);
    const RHPSolution sol(T, cs, J, opt);
    const auto l = reconstruct_L(sol.Y(0.0));
    L[i] = Vec3(l.L1, l.L2, l.L3);
  }
  return SpinField::from_samples(xs, L);
}

}  // namespace lltorus
