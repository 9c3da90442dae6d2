#pragma once

#include <vector>

namespace lltorus {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points (Golub-Welsch).  Cached per n.
const QuadratureRule& gauss_legendre(int n);

}  // namespace lltorus
