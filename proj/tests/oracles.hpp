#pragma once

// Test-only reference computations and random instance generators. Nothing
// here calls into the library routines it is used to check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qpr/process.hpp"

namespace qpr::test {

using Complex = std::complex<double>;

/// Seeded complex Gaussian matrix.
inline ComplexMatrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  const ComplexMatrix g = gaussian_matrix(rng, dim, dim);
  return (g + g.adjoint()) / 2.0;
}

inline PureState random_state(std::mt19937_64& rng, Eigen::Index dim) {
  return PureState::normalized(gaussian_matrix(rng, dim, 1));
}

/// Random density operator of the given rank (Wishart construction).
inline DensityOperator random_density(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index rank) {
  const ComplexMatrix g = gaussian_matrix(rng, dim, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return DensityOperator(rho);
}

/// Random CPTP map with `n_kraus` operators from a Haar-like isometry
/// (QR of a Gaussian matrix), d_in → d_out.
inline KrausChannel random_channel(std::mt19937_64& rng, Eigen::Index d_in, Eigen::Index d_out, int n_kraus) {
  const ComplexMatrix g = gaussian_matrix(rng, d_out * n_kraus, d_in);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d_out * n_kraus, d_in);
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < n_kraus; ++k) ops.push_back(q.block(k * d_out, 0, d_out, d_in));
  return KrausChannel(std::move(ops));
}

/// Random unitary from the QR decomposition of a Gaussian matrix.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(rng, dim, dim));
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

/// Kronecker product by the explicit index formula
/// (a⊗b)[i·rb + k, j·cb + l] = a[i,j] b[k,l].
inline ComplexMatrix kron_by_index(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Three-qubit partial trace by explicit summation over the two traced
/// indices; `keep` ∈ {0, 1, 2}.
inline ComplexMatrix partial_trace_3q_by_sum(const ComplexMatrix& rho, int keep) {
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  auto idx = [](int q0, int q1, int q2) { return 4 * q0 + 2 * q1 + q2; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
          int r[3], c[3];
          int other[2] = {s, t};
          for (int q = 0, o = 0; q < 3; ++q) {
            if (q == keep) {
              r[q] = i;
              c[q] = j;
            } else {
              r[q] = c[q] = other[o++];
            }
          }
          out(i, j) += rho(idx(r[0], r[1], r[2]), idx(c[0], c[1], c[2]));
        }
  return out;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qpr::test
