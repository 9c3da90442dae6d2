#pragma once

#include <complex>
#include <random>
#include <vector>

#include "lltorus/elliptic.hpp"

namespace testsupport {

using cplx = std::complex<double>;

// Uniform points of the fundamental domain kept `margin` away from the
// pole lattice 2K Z + 2iK' Z.
inline std::vector<cplx> torus_points(const lltorus::AnisotropyParams& p, int n, unsigned seed, double margin = 0.05) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(-2.0 * p.K, 2.0 * p.K), uy(-2.0 * p.Kprime, 2.0 * p.Kprime);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < n) {
    const cplx z(ux(gen), uy(gen));
    if (lltorus::distance_to_lattice(z, p).distance > margin) out.push_back(z);
  }
  return out;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testsupport
