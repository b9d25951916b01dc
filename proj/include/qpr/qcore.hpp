#pragma once

// Dense complex linear algebra for small Hilbert spaces (dims 2, 4, 8):
// states, density operators, Kronecker products, partial traces, a cyclic
// Jacobi eigensolver for Hermitian matrices and orthonormal basis completion.
//
// Everything here is templated on the real scalar type; the aliases at the
// bottom fix it to double for the rest of the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qpr {

/// Raised on violated preconditions (dimension mismatch, non-Hermitian
/// input, invalid parameters).
class Error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace tolerance {
inline constexpr double kNormalization = 1e-12;
inline constexpr double kHermitianState = 1e-12;
inline constexpr double kHermitianInput = 1e-10;
inline constexpr double kNegativeEigenvalue = 1e-10;
inline constexpr double kOrthonormal = 1e-10;
inline constexpr double kCompletionResidual = 1e-8;
inline constexpr double kJacobiOffDiagonal = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;
}  // namespace tolerance

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto z = m(i, j);
      if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z))) return false;
    }
  return true;
}

/// Largest entrywise modulus of m − m†.
template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Normalized amplitude vector.
template <typename Scalar>
class BasicPureState {
 public:
  using Vector = CVector<Scalar>;

  /// Takes ownership of amplitudes that must already be normalized.
  explicit BasicPureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw Error("PureState: empty amplitude vector");
    if (!all_finite(amps_)) throw Error("PureState: non-finite amplitude");
    const Scalar n2 = amps_.squaredNorm();
    if (std::abs(n2 - Scalar(1)) > Scalar(tolerance::kNormalization))
      throw Error("PureState: amplitudes not normalized (|psi|^2 = " + std::to_string(n2) + ")");
  }

  /// Rescales a nonzero vector to unit norm.
  static BasicPureState normalized(Vector v) {
    const Scalar n = v.norm();
    if (!(n > Scalar(0))) throw Error("PureState: cannot normalize zero vector");
    v /= n;
    return BasicPureState(std::move(v));
  }

  /// Computational basis vector |index⟩.
  static BasicPureState basis(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) throw Error("PureState: basis index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1;
    return BasicPureState(std::move(v));
  }

  Eigen::Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  std::complex<Scalar> operator[](Eigen::Index i) const { return amps_(i); }

  /// ⟨this|other⟩
  std::complex<Scalar> inner(const BasicPureState& other) const {
    if (other.dim() != dim()) throw Error("PureState: dimension mismatch in inner product");
    return amps_.dot(other.amps_);
  }

  CMatrix<Scalar> projector() const { return amps_ * amps_.adjoint(); }

 private:
  Vector amps_;
};

/// Hermitian, positive-semidefinite, unit-trace matrix.
template <typename Scalar>
class BasicDensityOperator {
 public:
  using Matrix = CMatrix<Scalar>;

  explicit BasicDensityOperator(Matrix m);

  static BasicDensityOperator from_pure(const BasicPureState<Scalar>& psi) {
    return BasicDensityOperator(psi.projector());
  }

  static BasicDensityOperator maximally_mixed(Eigen::Index dim) {
    return BasicDensityOperator(Matrix::Identity(dim, dim) / Scalar(dim));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  /// ⟨psi|ρ|psi⟩ (real part; the imaginary part vanishes for Hermitian ρ).
  Scalar expectation(const BasicPureState<Scalar>& psi) const {
    if (psi.dim() != dim()) throw Error("DensityOperator: dimension mismatch in expectation");
    return std::real(psi.amplitudes().dot(m_ * psi.amplitudes()));
  }

 private:
  Matrix m_;
};

/// Eigenvalues sorted descending with matching orthonormal eigenvectors.
template <typename Scalar>
struct BasicEigenDecomposition {
  RVector<Scalar> eigenvalues;
  std::vector<BasicPureState<Scalar>> eigenvectors;

  CMatrix<Scalar> reconstruct() const {
    const Eigen::Index n = eigenvalues.size();
    CMatrix<Scalar> out = CMatrix<Scalar>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      out += eigenvalues(i) * eigenvectors[static_cast<std::size_t>(i)].projector();
    return out;
  }
};

// ---------------------------------------------------------------------------
// Tensor products and partial trace

/// Kronecker product a ⊗ b.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using S = typename DerivedA::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Scalar>
BasicPureState<Scalar> tensor(const BasicPureState<Scalar>& a, const BasicPureState<Scalar>& b) {
  return BasicPureState<Scalar>::normalized(tensor(a.amplitudes(), b.amplitudes()));
}

template <typename Scalar>
BasicDensityOperator<Scalar> tensor(const BasicDensityOperator<Scalar>& a,
                                    const BasicDensityOperator<Scalar>& b) {
  return BasicDensityOperator<Scalar>(tensor(a.matrix(), b.matrix()));
}

/// Reduced operator on subsystem `keep` of a multipartite square matrix with
/// subsystem dimensions `dims` (first entry is the most significant index).
template <typename Scalar>
CMatrix<Scalar> partial_trace(const CMatrix<Scalar>& rho, std::span<const Eigen::Index> dims,
                              std::size_t keep) {
  if (dims.empty()) throw Error("partial_trace: empty dimension list");
  if (keep >= dims.size()) throw Error("partial_trace: kept subsystem index out of range");
  const Eigen::Index total =
      std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>{});
  if (rho.rows() != total || rho.cols() != total)
    throw Error("partial_trace: product of subsystem dims does not match operator dimension");

  // total = left * d * right with d the kept subsystem dimension.
  const Eigen::Index d = dims[keep];
  const Eigen::Index left = std::accumulate(dims.begin(), dims.begin() + static_cast<long>(keep),
                                            Eigen::Index{1}, std::multiplies<>{});
  const Eigen::Index right = total / (left * d);

  CMatrix<Scalar> out = CMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      std::complex<Scalar> acc{0};
      for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index r = 0; r < right; ++r)
          acc += rho((l * d + i) * right + r, (l * d + j) * right + r);
      out(i, j) = acc;
    }
  return out;
}

template <typename Scalar>
BasicDensityOperator<Scalar> partial_trace(const BasicDensityOperator<Scalar>& rho,
                                           std::span<const Eigen::Index> dims, std::size_t keep) {
  return BasicDensityOperator<Scalar>(partial_trace(rho.matrix(), dims, keep));
}

template <typename Scalar>
BasicDensityOperator<Scalar> partial_trace(const BasicDensityOperator<Scalar>& rho,
                                           std::initializer_list<Eigen::Index> dims,
                                           std::size_t keep) {
  return partial_trace(rho, std::span<const Eigen::Index>(dims.begin(), dims.size()), keep);
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic complex Jacobi)

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Each rotation first removes the phase of the pivot a_pq with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation to the (p, q)
/// plane. Sweeps stop once the off-diagonal Frobenius norm drops below
/// 1e-14 (relative to the matrix norm when that exceeds one). Eigenvalues
/// are stable-sorted descending, so degenerate pairs keep sweep order.
template <typename Derived>
BasicEigenDecomposition<typename Eigen::NumTraits<typename Derived::Scalar>::Real> hermitian_eig(
    const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Complex = std::complex<Real>;
  using Matrix = CMatrix<Real>;

  if (m.rows() != m.cols() || m.rows() == 0) throw Error("hermitian_eig: matrix must be square");
  if (!all_finite(m)) throw Error("hermitian_eig: non-finite entry");
  if (hermiticity_defect(m) > Real(tolerance::kHermitianInput))
    throw Error("hermitian_eig: matrix is not Hermitian");

  const Eigen::Index n = m.rows();
  Matrix a = (m + m.adjoint()) / Real(2);
  Matrix v = Matrix::Identity(n, n);

  const Real scale = std::max(Real(1), a.norm());
  const Real threshold = Real(tolerance::kJacobiOffDiagonal) * scale;
  auto off_norm = [&] {
    Real s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = off_norm() < threshold;
  for (int sweep = 0; sweep < tolerance::kJacobiMaxSweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real mag = std::abs(a(p, q));
        if (mag == Real(0)) continue;
        const Complex phase = a(p, q) / mag;  // e^{i alpha}
        const Real app = std::real(a(p, p));
        const Real aqq = std::real(a(q, q));
        const Real zeta = (aqq - app) / (Real(2) * mag);
        const Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1));
        const Real c = Real(1) / std::sqrt(t * t + 1);
        const Real s = t * c;

        // G restricted to (p, q): [[c, s], [-s e^{-i alpha}, c e^{-i alpha}]].
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {  // a <- a G
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + gqp * akq;
          a(k, q) = s * akp + gqq * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // a <- G^† a
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(gqp) * aqk;
          a(q, k) = s * apk + std::conj(gqq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // v <- v G
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + gqp * vkq;
          v(k, q) = s * vkp + gqq * vkq;
        }
        a(p, q) = a(q, p) = Complex(0);
        a(p, p) = Complex(std::real(a(p, p)));
        a(q, q) = Complex(std::real(a(q, q)));
      }
    }
    converged = off_norm() < threshold;
  }
  if (!converged) throw Error("hermitian_eig: Jacobi sweeps did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::real(a(i, i)) > std::real(a(j, j));
  });

  BasicEigenDecomposition<Real> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index idx = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = std::real(a(idx, idx));
    out.eigenvectors.push_back(BasicPureState<Real>::normalized(v.col(idx)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orthonormal basis completion

/// Order in which computational basis vectors are offered as completion
/// candidates.
enum class CompletionOrder { Forward, Reverse };

template <typename Scalar>
Scalar gram_defect(std::span<const BasicPureState<Scalar>> vs) {
  Scalar worst = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const auto g = vs[i].inner(vs[j]);
      worst = std::max(worst, std::abs(g - std::complex<Scalar>(i == j ? 1 : 0)));
    }
  return worst;
}

/// Extends an orthonormal family to a full basis of C^dim by Gram-Schmidt
/// against computational basis candidates, discarding candidates whose
/// residual norm is below 1e-8. The input vectors come first, unchanged.
template <typename Scalar>
std::vector<BasicPureState<Scalar>> complete_basis(std::span<const BasicPureState<Scalar>> partial,
                                                   Eigen::Index dim,
                                                   CompletionOrder order = CompletionOrder::Forward) {
  if (dim <= 0) throw Error("complete_basis: dimension must be positive");
  if (static_cast<Eigen::Index>(partial.size()) > dim)
    throw Error("complete_basis: more vectors than the space dimension");
  for (const auto& v : partial)
    if (v.dim() != dim) throw Error("complete_basis: vector dimension mismatch");
  if (gram_defect(partial) > Scalar(tolerance::kOrthonormal))
    throw Error("complete_basis: input vectors are not orthonormal");

  std::vector<BasicPureState<Scalar>> basis(partial.begin(), partial.end());
  for (Eigen::Index step = 0; step < dim && static_cast<Eigen::Index>(basis.size()) < dim; ++step) {
    const Eigen::Index k = order == CompletionOrder::Forward ? step : dim - 1 - step;
    CVector<Scalar> r = CVector<Scalar>::Zero(dim);
    r(k) = 1;
    // Two Gram-Schmidt passes keep the result orthogonal to rounding.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) r -= u.amplitudes() * u.amplitudes().dot(r);
    if (r.norm() < Scalar(tolerance::kCompletionResidual)) continue;
    basis.push_back(BasicPureState<Scalar>::normalized(std::move(r)));
  }
  if (static_cast<Eigen::Index>(basis.size()) != dim)
    throw Error("complete_basis: failed to span the space");
  return basis;
}

template <typename Scalar>
std::vector<BasicPureState<Scalar>> complete_basis(const std::vector<BasicPureState<Scalar>>& partial,
                                                   Eigen::Index dim,
                                                   CompletionOrder order = CompletionOrder::Forward) {
  return complete_basis(std::span<const BasicPureState<Scalar>>(partial), dim, order);
}

// ---------------------------------------------------------------------------

template <typename Scalar>
BasicDensityOperator<Scalar>::BasicDensityOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw Error("DensityOperator: matrix must be square and nonempty");
  if (!all_finite(m_)) throw Error("DensityOperator: non-finite entry");
  if (hermiticity_defect(m_) > Scalar(tolerance::kHermitianState))
    throw Error("DensityOperator: matrix is not Hermitian");
  const Scalar tr = std::real(m_.trace());
  if (std::abs(tr - Scalar(1)) > Scalar(tolerance::kNormalization))
    throw Error("DensityOperator: trace is " + std::to_string(tr) + ", expected 1");
  const auto eig = hermitian_eig(m_);
  if (eig.eigenvalues.minCoeff() < -Scalar(tolerance::kNegativeEigenvalue))
    throw Error("DensityOperator: matrix is not positive semidefinite");
}

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using PureState = BasicPureState<double>;
using DensityOperator = BasicDensityOperator<double>;
using EigenDecomposition = BasicEigenDecomposition<double>;

/// Pauli matrices and the 2x2 identity.
namespace pauli {
inline ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
inline ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix y() {
  using namespace std::complex_literals;
  ComplexMatrix m(2, 2);
  m << 0, -1i, 1i, 0;
  return m;
}
inline ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

}  // namespace qpr
