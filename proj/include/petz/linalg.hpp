#pragma once

// Dense complex kernel: Hermitian eigendecomposition, PSD matrix functions,
// unitary completion, tensor algebra, and the two state functionals
// (Uhlmann-Jozsa fidelity, quantum relative entropy).
//
// Everything here is templated on the real scalar type and takes Eigen
// expressions; `ComplexMatrix` / `DensityMatrix` are the double-precision
// aliases the rest of the library uses.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "petz/error.hpp"

namespace petz {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-8;
inline constexpr double kClampTol = 1e-10;
inline constexpr double kRankTol = 1e-10;

/// Entrywise equality with an explicit absolute tolerance.
template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  typename DerivedA::RealScalar tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  if (u.rows() != u.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  const Plain id = Plain::Identity(u.rows(), u.cols());
  return std::max((u.adjoint() * u - id).norm(), (u * u.adjoint() - id).norm());
}

template <typename Real>
struct EigDecomposition {
  RVector<Real> eigenvalues;  // ascending
  CMatrix<Real> eigenvectors;  // columns

  CMatrix<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
/// decomposing; asymmetry above `tol` is rejected.
template <typename Derived>
EigDecomposition<typename Derived::RealScalar> herm_eig(const Eigen::MatrixBase<Derived>& a,
                                                         double tol = kHermitianTol) {
  using Real = typename Derived::RealScalar;
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimMismatch, "herm_eig: matrix is not square");
  const CMatrix<Real> m = a.template cast<std::complex<Real>>();
  if (hermitian_defect(m) > tol) throw Error(ErrorKind::NotHermitian, "herm_eig: asymmetry exceeds tolerance");
  const CMatrix<Real> sym = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(sym);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NotHermitian, "herm_eig: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

template <typename Real, typename F>
CMatrix<Real> spectral_apply(const EigDecomposition<Real>& eig, F&& f) {
  RVector<Real> mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(eig.eigenvalues(i));
  return eig.eigenvectors * mapped.template cast<std::complex<Real>>().asDiagonal() * eig.eigenvectors.adjoint();
}

template <typename Real>
void require_psd(const EigDecomposition<Real>& eig, const char* who) {
  if (eig.eigenvalues.size() > 0 && eig.eigenvalues(0) < -Real(kClampTol))
    throw Error(ErrorKind::NotPSD, std::string(who) + ": eigenvalue below -1e-10");
}

}  // namespace detail

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are
/// clamped to zero, and so are positive ones at round-off level relative to
/// the largest (their square roots would otherwise be ~1e-8).
template <typename Derived>
CMatrix<typename Derived::RealScalar> psd_sqrt(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  const auto eig = herm_eig(a);
  detail::require_psd(eig, "psd_sqrt");
  const Real top = eig.eigenvalues.size() ? std::max(eig.eigenvalues.maxCoeff(), Real(0)) : Real(0);
  const Real noise = Real(64) * std::numeric_limits<Real>::epsilon() * top;
  return detail::spectral_apply(eig, [noise](Real x) { return x > noise ? std::sqrt(x) : Real(0); });
}

/// Moore-Penrose inverse square root: eigenvalues above rank_tol * lambda_max
/// map to lambda^(-1/2), the rest to zero.
template <typename Derived>
CMatrix<typename Derived::RealScalar> psd_inv_sqrt(const Eigen::MatrixBase<Derived>& a,
                                                   double rank_tol = kRankTol) {
  using Real = typename Derived::RealScalar;
  const auto eig = herm_eig(a);
  detail::require_psd(eig, "psd_inv_sqrt");
  const Real lambda_max = eig.eigenvalues.size() ? eig.eigenvalues.maxCoeff() : Real(0);
  const Real cutoff = Real(rank_tol) * lambda_max;
  if (lambda_max <= 0 || (eig.eigenvalues.array() <= cutoff).all())
    throw Error(ErrorKind::ZeroMatrix, "psd_inv_sqrt: no eigenvalue above the rank threshold");
  return detail::spectral_apply(eig, [cutoff](Real x) { return x > cutoff ? Real(1) / std::sqrt(x) : Real(0); });
}

/// Projector onto the eigenspaces kept by psd_inv_sqrt.
template <typename Derived>
CMatrix<typename Derived::RealScalar> support_projector(const Eigen::MatrixBase<Derived>& a,
                                                        double rank_tol = kRankTol) {
  using Real = typename Derived::RealScalar;
  const auto eig = herm_eig(a);
  const Real cutoff = Real(rank_tol) * std::max(eig.eigenvalues.maxCoeff(), Real(0));
  return detail::spectral_apply(eig, [cutoff](Real x) { return x > cutoff ? Real(1) : Real(0); });
}

/// Extends a unit vector to a unitary whose column 0 is exactly that vector.
/// Remaining columns come from Gram-Schmidt over the standard basis, taking at
/// each step the basis vector with the largest residual.
template <typename Derived>
CMatrix<typename Derived::RealScalar> complete_unitary(const Eigen::MatrixBase<Derived>& first_column) {
  using Real = typename Derived::RealScalar;
  using Vec = CVector<Real>;
  const Vec v0 = first_column.template cast<std::complex<Real>>();
  const Eigen::Index n = v0.size();
  if (n == 0 || std::abs(v0.norm() - Real(1)) > Real(1e-10))
    throw Error(ErrorKind::NotNormalized, "complete_unitary: first column must have unit norm");

  CMatrix<Real> u(n, n);
  u.col(0) = v0;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = 1; k < n; ++k) {
    Vec best;
    Real best_norm = -1;
    std::size_t best_index = 0;
    for (Eigen::Index e = 0; e < n; ++e) {
      if (used[static_cast<std::size_t>(e)]) continue;
      Vec r = Vec::Unit(n, e);
      // Two passes of classical Gram-Schmidt keep the columns orthogonal to ~eps.
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < k; ++j) r -= u.col(j) * u.col(j).dot(r);
      if (r.norm() > best_norm) {
        best_norm = r.norm();
        best = r;
        best_index = static_cast<std::size_t>(e);
      }
    }
    used[best_index] = true;
    u.col(k) = best / best_norm;
  }
  return u;
}

/// Kronecker product; the left factor indexes the most significant bits.
template <typename DerivedA, typename DerivedB>
CMatrix<typename DerivedA::RealScalar> tensor(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  using Real = typename DerivedA::RealScalar;
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  const CMatrix<Real> bb = b.template cast<std::complex<Real>>();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = std::complex<Real>(a(i, j)) * bb;
  return out;
}

template <typename Real>
CMatrix<Real> tensor(std::initializer_list<CMatrix<Real>> factors) {
  CMatrix<Real> out = CMatrix<Real>::Identity(1, 1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

/// Unit-trace, Hermitian, PSD matrix. Construction validates every invariant
/// at 1e-10.
template <typename Real>
class BasicDensityMatrix {
 public:
  static constexpr Real kTol = Real(1e-10);

  explicit BasicDensityMatrix(CMatrix<Real> m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw Error(ErrorKind::InvalidState, "density matrix must be square and non-empty");
    if (hermitian_defect(m_) > kTol) throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
    if (std::abs(m_.trace() - std::complex<Real>(1)) > kTol)
      throw Error(ErrorKind::InvalidState, "density matrix trace differs from 1");
    m_ = (m_ + m_.adjoint()).eval() / Real(2);
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(m_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()(0) < -kTol) throw Error(ErrorKind::InvalidState, "density matrix has a negative eigenvalue");
  }

  static BasicDensityMatrix pure(const CVector<Real>& psi) {
    const Real n = psi.norm();
    if (n == 0) throw Error(ErrorKind::InvalidState, "zero state vector");
    const CVector<Real> unit = psi / n;
    return BasicDensityMatrix(unit * unit.adjoint());
  }

  static BasicDensityMatrix basis(Eigen::Index dim, Eigen::Index index) {
    return pure(CVector<Real>::Unit(dim, index));
  }

  static BasicDensityMatrix maximally_mixed(Eigen::Index dim) {
    return BasicDensityMatrix(CMatrix<Real>::Identity(dim, dim) / Real(dim));
  }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix<Real>& matrix() const noexcept { return m_; }
  std::complex<Real> operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  CMatrix<Real> m_;
};

using DensityMatrix = BasicDensityMatrix<double>;

/// Reduced state of subsystem `keep` for a state on a product space with
/// subsystem dimensions `dims` (index 0 most significant).
template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, std::size_t keep,
                                       std::span<const Eigen::Index> dims) {
  if (keep >= dims.size()) throw Error(ErrorKind::DimMismatch, "partial_trace: subsystem index out of range");
  const Eigen::Index total = std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
  if (total != rho.dim()) throw Error(ErrorKind::DimMismatch, "partial_trace: product of dims differs from state dim");

  const Eigen::Index d_keep = dims[keep];
  Eigen::Index stride = 1;  // stride of the kept index in the flat basis
  for (std::size_t s = keep + 1; s < dims.size(); ++s) stride *= dims[s];
  const Eigen::Index d_right = stride;
  const Eigen::Index d_left = total / (d_keep * d_right);

  CMatrix<Real> out = CMatrix<Real>::Zero(d_keep, d_keep);
  const auto& m = rho.matrix();
  for (Eigen::Index l = 0; l < d_left; ++l)
    for (Eigen::Index r = 0; r < d_right; ++r)
      for (Eigen::Index i = 0; i < d_keep; ++i)
        for (Eigen::Index j = 0; j < d_keep; ++j)
          out(i, j) += m((l * d_keep + i) * d_right + r, (l * d_keep + j) * d_right + r);
  return BasicDensityMatrix<Real>(out);
}

template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, std::size_t keep,
                                       std::initializer_list<Eigen::Index> dims) {
  return partial_trace(rho, keep, std::span<const Eigen::Index>(dims.begin(), dims.size()));
}

/// Uhlmann-Jozsa fidelity [Tr sqrt(sqrt(sigma) rho sqrt(sigma))]^2, clamped to [0, 1].
template <typename Real>
Real fidelity(const BasicDensityMatrix<Real>& rho, const BasicDensityMatrix<Real>& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimMismatch, "fidelity: dimension mismatch");
  // Tr sqrt(sqrt(s) r sqrt(s)) is the trace norm of sqrt(r) sqrt(s); singular
  // values avoid taking square roots of round-off.
  const CMatrix<Real> prod = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  const Real tr = Eigen::JacobiSVD<CMatrix<Real>>(prod).singularValues().sum();
  return std::clamp(tr * tr, Real(0), Real(1));
}

/// Fidelity against a pure target, <psi|rho|psi>.
template <typename Real>
Real fidelity(const BasicDensityMatrix<Real>& rho, const CVector<Real>& psi) {
  if (rho.dim() != psi.size()) throw Error(ErrorKind::DimMismatch, "fidelity: dimension mismatch");
  const CVector<Real> unit = psi / psi.norm();
  return std::clamp(std::real(unit.dot(rho.matrix() * unit)), Real(0), Real(1));
}

/// Quantum relative entropy D(rho||sigma) in nats; +inf when the support of
/// rho is not contained in the support of sigma.
template <typename Real>
Real relative_entropy(const BasicDensityMatrix<Real>& rho, const BasicDensityMatrix<Real>& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimMismatch, "relative_entropy: dimension mismatch");
  const auto er = herm_eig(rho.matrix());
  const auto es = herm_eig(sigma.matrix());
  const Real support_tol = Real(kRankTol);
  // overlap(i, j) = |<r_i|s_j>|^2
  const RVector<Real> lr = er.eigenvalues;
  const RVector<Real> ls = es.eigenvalues;
  const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> overlap =
      (er.eigenvectors.adjoint() * es.eigenvectors).cwiseAbs2();

  Real d = 0;
  for (Eigen::Index i = 0; i < lr.size(); ++i) {
    if (lr(i) <= support_tol) continue;
    d += lr(i) * std::log(lr(i));
    for (Eigen::Index j = 0; j < ls.size(); ++j) {
      if (overlap(i, j) <= support_tol) continue;
      if (ls(j) <= support_tol) return std::numeric_limits<Real>::infinity();
      d -= lr(i) * overlap(i, j) * std::log(ls(j));
    }
  }
  return d;
}

}  // namespace petz
