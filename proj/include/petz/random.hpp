#pragma once

// Seeded random test objects (Ginibre ensembles).

#include <random>

#include "petz/linalg.hpp"

namespace petz {

template <typename Engine>
ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

template <typename Engine>
ComplexMatrix random_hermitian(Eigen::Index dim, Engine& rng) {
  const ComplexMatrix b = random_ginibre(dim, dim, rng);
  return b + b.adjoint();
}

/// Full rank with probability one.
template <typename Engine>
DensityMatrix random_density(Eigen::Index dim, Engine& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix((rho + rho.adjoint()) / 2.0);
}

template <typename Engine>
ComplexMatrix random_unitary(Eigen::Index dim, Engine& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

template <typename Engine>
ComplexVector random_unit_vector(Eigen::Index dim, Engine& rng) {
  ComplexVector v = random_ginibre(dim, 1, rng);
  return v / v.norm();
}

}  // namespace petz
