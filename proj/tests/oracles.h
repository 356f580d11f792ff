#pragma once

// Slow, direct reference computations that share no code with the library.

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qric/statealg.h"

namespace oracle {

using qric::cplx;
using qric::Matrix;
using qric::Vector;

inline cplx w(int d, long long k) {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(((k % d) + d) % d) / d;
  return {std::cos(t), std::sin(t)};
}

/// U^{m,n}|k> = w^{km}|k+n>, written out entry by entry.
inline Matrix weyl_u(int d, int m, int n) {
  Matrix u = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) u((k + n % d + d) % d, k) = w(d, static_cast<long long>(k) * m);
  return u;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

/// I (x) .. op at `pos` .. (x) I over n qudits.
inline Matrix embed(const Matrix& op, int d, int n, int pos) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == pos ? op : Matrix(Matrix::Identity(d, d)));
  return out;
}

inline Vector basis(int d, int j) {
  Vector v = Vector::Zero(d);
  v[j] = 1.0;
  return v;
}

/// (1/sqrt d) sum_j w^{jm} |j>|j+n>
inline Vector bell(int d, int m, int n) {
  Vector v = Vector::Zero(d * d);
  for (int j = 0; j < d; ++j) v[j * d + (j + n) % d] += w(d, static_cast<long long>(j) * m) / std::sqrt(double(d));
  return v;
}

inline Vector random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v.normalized();
}

inline Matrix random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
  return m;
}

/// Reduced operator on the first `keep` dits of an n-dit vector by explicit sums.
inline Matrix trace_tail(const Vector& psi, int d, int n, int keep) {
  const int dk = static_cast<int>(std::pow(d, keep));
  const int dr = static_cast<int>(std::pow(d, n - keep));
  Matrix rho = Matrix::Zero(dk, dk);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b)
      for (int r = 0; r < dr; ++r) rho(a, b) += psi[a * dr + r] * std::conj(psi[b * dr + r]);
  return rho;
}

/// Every tuple of length 2N over Z_d whose odd/even sums hit (u, v).
inline std::vector<std::vector<int>> filtered_tuples(int d, int N, int u, int v) {
  std::vector<std::vector<int>> out;
  const int len = 2 * N;
  const long long total = static_cast<long long>(std::pow(d, len));
  for (long long code = 0; code < total; ++code) {
    std::vector<int> k(len);
    long long c = code;
    for (int i = len - 1; i >= 0; --i) {
      k[i] = static_cast<int>(c % d);
      c /= d;
    }
    int so = 0, se = 0;
    for (int i = 0; i < len; i += 2) so += k[i];
    for (int i = 1; i < len; i += 2) se += k[i];
    if (so % d == u && se % d == v) out.push_back(k);
  }
  return out;
}

/// Every count within 5 sigma of its binomial expectation.
inline void expect_multinomial(const std::vector<double>& p, const std::vector<int>& counts, int trials) {
  ASSERT_EQ(p.size(), counts.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mean = trials * p[i];
    const double sigma = std::sqrt(trials * p[i] * (1.0 - p[i]));
    EXPECT_LE(std::abs(counts[i] - mean), 5.0 * sigma + 1e-9) << "outcome " << i;
  }
}

inline double entropy_bits(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (l > 1e-12) s -= l * std::log2(l);
  }
  return s;
}

}  // namespace oracle
