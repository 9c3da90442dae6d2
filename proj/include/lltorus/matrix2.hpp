#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace lltorus {

using cplx = std::complex<double>;
using ComplexMatrix2 = Eigen::Matrix2cd;

namespace pauli {
const ComplexMatrix2& id();
const ComplexMatrix2& s1();
const ComplexMatrix2& s2();
const ComplexMatrix2& s3();
const ComplexMatrix2& s(int j);  // j = 0..3, s(0) is the identity
}  // namespace pauli

// M = c0 1 + c1 s1 + c2 s2 + c3 s3
std::array<cplx, 4> pauli_decompose(const ComplexMatrix2& m);
ComplexMatrix2 pauli_assemble(const std::array<cplx, 4>& c);

// s_j M s_j
ComplexMatrix2 conj_by(int j, const ComplexMatrix2& m);

// Inverse that throws when |det| is below the configured floor.
ComplexMatrix2 checked_inverse(const ComplexMatrix2& m, double floor);

double max_abs(const ComplexMatrix2& m);

// diag(z, 1/z) style powers: z^{s3} = diag(z, z^{-1}) with z = exp(e).
ComplexMatrix2 exp_sigma3(cplx e);

}  // namespace lltorus
