#include "lltorus/matrix2.hpp"

#include "lltorus/config.hpp"
#include "lltorus/errors.hpp"

namespace lltorus {

Tolerances& default_tolerances() {
  static Tolerances t;
  return t;
}

namespace pauli {
namespace {
const cplx I(0.0, 1.0);
ComplexMatrix2 make(cplx a, cplx b, cplx c, cplx d) {
  ComplexMatrix2 m;
  m << a, b, c, d;
  return m;
}
}  // namespace

const ComplexMatrix2& id() {
  static const ComplexMatrix2 m = ComplexMatrix2::Identity();
  return m;
}
const ComplexMatrix2& s1() {
  static const ComplexMatrix2 m = make(0, 1, 1, 0);
  return m;
}
const ComplexMatrix2& s2() {
  static const ComplexMatrix2 m = make(0, -I, I, 0);
  return m;
}
const ComplexMatrix2& s3() {
  static const ComplexMatrix2 m = make(1, 0, 0, -1);
  return m;
}
const ComplexMatrix2& s(int j) {
  switch (j) {
    case 1: return s1();
    case 2: return s2();
    case 3: return s3();
    default: return id();
  }
}
}  // namespace pauli

std::array<cplx, 4> pauli_decompose(const ComplexMatrix2& m) {
  // c_j = tr(s_j M) / 2
  const cplx I(0.0, 1.0);
  return {0.5 * (m(0, 0) + m(1, 1)), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * I * (m(0, 1) - m(1, 0)),
          0.5 * (m(0, 0) - m(1, 1))};
}

ComplexMatrix2 pauli_assemble(const std::array<cplx, 4>& c) {
  return c[0] * pauli::id() + c[1] * pauli::s1() + c[2] * pauli::s2() + c[3] * pauli::s3();
}

ComplexMatrix2 conj_by(int j, const ComplexMatrix2& m) {
  switch (j) {
    case 1: return (ComplexMatrix2() << m(1, 1), m(1, 0), m(0, 1), m(0, 0)).finished();
    case 2: return (ComplexMatrix2() << m(1, 1), -m(1, 0), -m(0, 1), m(0, 0)).finished();
    case 3: return (ComplexMatrix2() << m(0, 0), -m(0, 1), -m(1, 0), m(1, 1)).finished();
    default: return m;
  }
}

ComplexMatrix2 checked_inverse(const ComplexMatrix2& m, double floor) {
  const cplx d = m.determinant();
  if (std::abs(d) <= floor)
    throw Error(ErrorKind::Singular, "matrix2", "determinant below floor").with("det", d);
  ComplexMatrix2 inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / d;
}

double max_abs(const ComplexMatrix2& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix2 exp_sigma3(cplx e) {
  ComplexMatrix2 m = ComplexMatrix2::Zero();
  m(0, 0) = std::exp(e);
  m(1, 1) = std::exp(-e);
  return m;
}

}  // namespace lltorus
