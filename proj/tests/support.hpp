#pragma once

#include <cmath>
#include <random>

#include <doctest.h>

#include "petz/harness.hpp"
#include "petz/random.hpp"

namespace testing {

using petz::Complex;
using petz::ComplexMatrix;
using petz::ComplexVector;
using petz::DensityMatrix;

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

inline ComplexMatrix diag(std::initializer_list<Complex> entries) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (Complex e : entries) {
    m(i, i) = e;
    ++i;
  }
  return m;
}

inline double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Kraus sum written out longhand, independent of the library's apply().
inline ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& ks, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(ks.front().rows(), ks.front().rows());
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

// Choi matrix by brute force over |i><j|.
inline ComplexMatrix brute_choi(const std::vector<ComplexMatrix>& ks) {
  const Eigen::Index din = ks.front().cols(), dout = ks.front().rows();
  ComplexMatrix c = ComplexMatrix::Zero(din * dout, din * dout);
  for (Eigen::Index i = 0; i < din; ++i)
    for (Eigen::Index j = 0; j < din; ++j) {
      ComplexMatrix eij = ComplexMatrix::Zero(din, din);
      eij(i, j) = 1;
      c.block(i * dout, j * dout, dout, dout) = kraus_sum(ks, eij);
    }
  return c;
}

inline const std::vector<double>& coarse_p() {
  static const std::vector<double> g = [] {
    std::vector<double> v;
    for (int i = 0; i <= 10; ++i) v.push_back(i / 10.0);
    return v;
  }();
  return g;
}

inline const std::vector<double>& interior_p() {
  static const std::vector<double> g = [] {
    std::vector<double> v;
    for (int i = 1; i <= 19; ++i) v.push_back(i / 20.0);
    return v;
  }();
  return g;
}

inline const std::vector<double>& epsilons() {
  static const std::vector<double> e{0.2, 0.5, 0.8};
  return e;
}

template <typename F>
petz::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const petz::Error& e) {
    return e.kind();
  }
  FAIL("expected petz::Error");
  return petz::ErrorKind::IoError;
}

}  // namespace testing
