#pragma once

#include <complex>

#include "lltorus/config.hpp"

namespace lltorus {

using cplx = std::complex<double>;

// Anisotropy constants J1 < J2 < J3 and the torus they define.
struct AnisotropyParams {
  double J1 = 0, J2 = 0, J3 = 0;
  double rho = 0;     // sqrt(J3 - J1) / 2
  double k = 0;       // sqrt((J2 - J1) / (J3 - J1))
  double kprime = 0;  // sqrt(1 - k^2)
  double K = 0, Kprime = 0;

  static AnisotropyParams from_J(double J1, double J2, double J3);
  // J1 = 0, J3 = 4 rho^2, J2 = k^2 J3.
  static AnisotropyParams from_modulus(double k, double rho = 1.0);
};

struct CompleteElliptic {
  double K, Kprime;
};

double agm(double a, double b);
CompleteElliptic complete_elliptic(double k);

struct SnCnDn {
  cplx sn, cn, dn;
};

// Real argument u, parameter m = k^2, via the descending Landen (AGM) scheme.
void jacobi_real(double u, double m, double& sn, double& cn, double& dn);
SnCnDn jacobi_sn_cn_dn(cplx lambda, double k);

// Point of the torus |Re| <= 2K, |Im| <= 2K'.
struct TorusPoint {
  cplx lambda;
  static TorusPoint reduce(cplx lambda, const AnisotropyParams& p);
};

struct LatticeDistance {
  double distance;
  cplx nearest;  // nearest translate of 0, 2K, 2iK', 2K+2iK'
};
LatticeDistance distance_to_lattice(cplx lambda, const AnisotropyParams& p);

struct WTriple {
  cplx w1, w2, w3;
};

// Elliptic functions tied to one torus: w_j, Weierstrass zeta/sigma on the
// lattice (4K, 4iK'), beta, and the Gusman-Rodin kernel.  Immutable after
// construction and safe to share between threads.
class Torus {
public:
  explicit Torus(const AnisotropyParams& p, const Tolerances& tol = default_tolerances());

  const AnisotropyParams& params() const { return p_; }
  const Tolerances& tolerances() const { return tol_; }
  double K() const { return p_.K; }
  double Kp() const { return p_.Kprime; }
  double rho() const { return p_.rho; }

  // Throws PoleProximity within the guard radius of a pole.
  WTriple w(cplx lambda) const;
  WTriple w_unchecked(cplx lambda) const;

  cplx zeta(cplx z) const;
  cplx sigma(cplx z) const;
  // zeta(z) - eta1 z / (2K): the 4K-periodic part of zeta.
  cplx zeta_periodic(cplx z) const;
  cplx eta1() const { return eta1_; }  // zeta(2K)
  cplx eta3() const { return eta3_; }  // zeta(2iK')

  cplx beta(cplx lambda) const;
  cplx beta0() const { return beta0_; }
  // log beta(z) for real z in (0, 2K), continued from log(beta0 z) at 0+.
  cplx log_beta_real(double z) const;

  cplx kernel(cplx mu, cplx lambda) const;
  // kernel without guards; mu-independent and lambda-independent parts split out
  cplx kernel_unchecked(cplx mu, cplx lambda) const;
  cplx f_sum(cplx mu) const;

  TorusPoint reduce(cplx lambda) const { return TorusPoint::reduce(lambda, p_); }

private:
  cplx theta1(cplx v) const;
  cplx theta1_logderiv(cplx v) const;

  AnisotropyParams p_;
  Tolerances tol_;
  double q_ = 0;
  double theta1p0_ = 0;  // theta1'(0)
  cplx eta1_, eta3_;
  cplx zetaK_;
  cplx beta0_;
};

// Free-function forms of the operations.
WTriple w_functions(cplx lambda, const Torus& T);
cplx weierstrass_zeta(cplx z, const Torus& T);
cplx weierstrass_sigma(cplx z, const Torus& T);
cplx beta_fn(cplx lambda, const Torus& T);
cplx cauchy_kernel(cplx mu, cplx lambda, const Torus& T);
cplx f_sum(cplx mu, const Torus& T);

}  // namespace lltorus
